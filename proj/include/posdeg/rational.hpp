#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "posdeg/errors.hpp"

namespace posdeg {

/// Exact arbitrary-precision rational; always kept in lowest terms.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw InputError("rational with zero denominator");
    Rational r{BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den))};
    r.canonicalize();
    return r;
}

/// Parses "p/q", an integer, or a finite decimal such as "0.125" or "-3.5e-2"
/// into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t first = 0;
    while (first < s.size() && std::isspace(static_cast<unsigned char>(s[first]))) ++first;
    s = s.substr(first);
    if (s.empty()) throw InputError("empty rational literal");

    if (s.find('/') != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0 || r.get_den() == 0)
            throw InputError("malformed rational '" + s + "'");
        r.canonicalize();
        return r;
    }

    std::string mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mantissa = s.substr(0, e);
        try {
            std::size_t used = 0;
            exponent = std::stol(s.substr(e + 1), &used);
            if (used != s.size() - e - 1) throw InputError("");
        } catch (...) {
            throw InputError("malformed exponent in '" + s + "'");
        }
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
        negative = mantissa[0] == '-';
        mantissa.erase(0, 1);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (char c : mantissa) {
        if (c == '.') {
            if (seen_point) throw InputError("malformed decimal '" + s + "'");
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw InputError("malformed number '" + s + "'");
        }
    }
    if (digits.empty()) throw InputError("malformed number '" + s + "'");

    BigInt num(digits, 10);
    if (negative) num = -num;
    long scale = exponent - frac_digits;
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    Rational r = scale >= 0 ? Rational(num * power) : Rational(num, power);
    r.canonicalize();
    return r;
}

/// "p/q", or just "p" for integers.
inline std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

/// Decimal rendering with 12 significant digits.
inline std::string format_decimal(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline Rational rational_pow(const Rational& base, unsigned exponent) {
    Rational result = 1;
    mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    result.canonicalize();
    return result;
}

} // namespace posdeg
