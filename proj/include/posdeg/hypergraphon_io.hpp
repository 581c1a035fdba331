#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "posdeg/errors.hpp"
#include "posdeg/step_hypergraphon.hpp"

// Hypergraphon file (JSON):
//
//   { "k": 3,
//     "lengths": ["1/2", "1/2"],
//     "table": [ {"assign": {"1": 0, "2": 0, "12": 1}, "value": "1/3"}, ... ],
//     "strict": true,              optional, default true
//     "support": "all" }           optional, "all" or "singletons"
//
// Coordinates are keyed by their 1-based element digits ("13" is x_{13}).
// Coordinates missing from an "assign" object match every part; later
// entries override earlier ones; cells no entry matches are 0. A strict
// file must already be symmetric, otherwise it is symmetrized on load.

namespace posdeg {

namespace detail {

inline std::uint32_t parse_coordinate_key(const std::string& key, int k) {
    if (key.empty() || static_cast<int>(key.size()) >= k)
        throw InputError("coordinate '" + key + "' must name 1..k-1 elements");
    std::uint32_t mask = 0;
    for (char c : key) {
        int d = c - '0';
        if (d < 1 || d > k) throw InputError("coordinate '" + key + "' has element outside 1..k");
        if (mask >> (d - 1) & 1u) throw InputError("coordinate '" + key + "' repeats an element");
        mask |= 1u << (d - 1);
    }
    return mask;
}

inline std::string coordinate_key(std::uint32_t mask) {
    std::string key;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1u) key += static_cast<char>('1' + i);
    return key;
}

inline Rational json_rational(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number()) return parse_rational(j.dump());
    throw InputError(std::string(what) + " must be a number or a \"p/q\" string");
}

} // namespace detail

inline StepHypergraphon parse_hypergraphon(std::string_view text, std::optional<bool> strict_override = std::nullopt) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("hypergraphon file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("k") || !doc.contains("lengths"))
        throw InputError("hypergraphon file needs \"k\" and \"lengths\"");
    const int k = doc["k"].get<int>();
    if (k < 2 || k > 8) throw InputError("k must be in 2..8");
    std::vector<Rational> lengths;
    for (const auto& len : doc["lengths"]) lengths.push_back(detail::json_rational(len, "length"));
    Support support = Support::all;
    if (doc.contains("support")) {
        const auto s = doc["support"].get<std::string>();
        if (s == "singletons")
            support = Support::singletons;
        else if (s != "all")
            throw InputError("support must be \"all\" or \"singletons\"");
    }
    const bool strict = strict_override ? *strict_override : doc.value("strict", true);

    // Start from an all-zero table of the right shape.
    const StepHypergraphon shape(k, lengths,
                                 std::vector<Rational>(
                                     [&] {
                                         std::size_t size = 1;
                                         const std::size_t dims = support == Support::all
                                                                      ? static_cast<std::size_t>(coordinate_count(k))
                                                                      : static_cast<std::size_t>(k);
                                         for (std::size_t i = 0; i < dims; ++i) {
                                             size *= lengths.size();
                                             if (size > StepHypergraphon::kMaxTableSize)
                                                 throw InputError("step table too large");
                                         }
                                         return size;
                                     }(),
                                     Rational(0)),
                                 support);
    std::vector<Rational> table = shape.table();
    const int m = shape.parts();

    if (doc.contains("table")) {
        for (const auto& entry : doc["table"]) {
            if (!entry.contains("value")) throw InputError("table entry without \"value\"");
            const Rational value = detail::json_rational(entry["value"], "value");
            std::vector<std::pair<std::uint32_t, int>> fixed;
            if (entry.contains("assign")) {
                for (const auto& [key, part] : entry["assign"].items()) {
                    const auto mask = detail::parse_coordinate_key(key, k);
                    const int p = part.get<int>();
                    if (p < 0 || p >= m) throw InputError("part index out of range for coordinate " + key);
                    if (support == Support::singletons && std::popcount(mask) != 1)
                        throw InputError("coordinate " + key + " not in a singleton-support table");
                    fixed.emplace_back(mask, p);
                }
            }
            for (std::size_t idx = 0; idx < table.size(); ++idx) {
                auto a = shape.assignment_of(idx);
                bool match = true;
                for (auto& [mask, p] : fixed) match &= a[mask - 1] == p;
                if (match) table[idx] = value;
            }
        }
    }
    StepHypergraphon w(k, std::move(lengths), std::move(table), support);
    if (auto violation = validate(w)) {
        if (strict) {
            std::string where;
            for (auto mask : w.support_masks())
                where += " x" + detail::coordinate_key(mask) + "=" + std::to_string(violation->assignment[mask - 1]);
            throw InputError("hypergraphon is not symmetric at" + where);
        }
        return symmetrize(w);
    }
    return w;
}

/// Writes every nonzero cell with a full assignment; parse_hypergraphon
/// reads it back to an equal object.
inline std::string serialize_hypergraphon(const StepHypergraphon& w) {
    nlohmann::ordered_json doc;
    doc["k"] = w.k();
    auto& lengths = doc["lengths"] = nlohmann::ordered_json::array();
    for (const auto& len : w.lengths()) lengths.push_back(to_string(len));
    doc["support"] = w.support() == Support::all ? "all" : "singletons";
    doc["strict"] = true;
    auto& table = doc["table"] = nlohmann::ordered_json::array();
    for (std::size_t idx = 0; idx < w.table().size(); ++idx) {
        if (w.table()[idx] == 0) continue;
        auto a = w.assignment_of(idx);
        nlohmann::ordered_json assign = nlohmann::ordered_json::object();
        for (auto mask : w.support_masks()) assign[detail::coordinate_key(mask)] = a[mask - 1];
        table.push_back({{"assign", assign}, {"value", to_string(w.table()[idx])}});
    }
    return doc.dump(2) + "\n";
}

} // namespace posdeg
