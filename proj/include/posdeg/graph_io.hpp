#pragma once

#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "posdeg/errors.hpp"
#include "posdeg/kgraph.hpp"

// Hypergraph text format:
//
//   k n          header, uniformity then vertex count
//   0 1 2        one edge per non-empty line, k vertex ids
//   # ...        comment lines are skipped
//
// A family file holds several graphs separated by lines containing "---".

namespace posdeg {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::uint64_t parse_uint(std::string_view token, std::size_t line_no) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line_no, "expected a nonnegative integer, got '" + std::string(token) + "'");
    return value;
}

inline bool is_comment_or_blank(std::string_view line) {
    auto tokens = split_ws(line);
    return tokens.empty() || tokens.front().front() == '#';
}

/// Parses lines [first, last) of `lines`; line numbers are 1-based offsets.
inline KGraph parse_lines(const std::vector<std::string_view>& lines, std::size_t first, std::size_t last) {
    std::size_t i = first;
    while (i < last && is_comment_or_blank(lines[i])) ++i;
    if (i == last) throw ParseError(last == 0 ? 1 : last, "missing 'k n' header");
    auto header = split_ws(lines[i]);
    if (header.size() != 2) throw ParseError(i + 1, "header must be 'k n'");
    const auto k = parse_uint(header[0], i + 1);
    const auto n = parse_uint(header[1], i + 1);
    if (k < 1 || k > 16) throw ParseError(i + 1, "k must be in 1..16");
    if (n > 0xffffffffu) throw ParseError(i + 1, "n too large");

    std::optional<KGraphBuilder> builder;
    try {
        builder.emplace(static_cast<int>(k), static_cast<Vertex>(n));
    } catch (const InputError& e) {
        throw ParseError(i + 1, e.what());
    }
    for (++i; i < last; ++i) {
        if (is_comment_or_blank(lines[i])) continue;
        auto tokens = split_ws(lines[i]);
        if (tokens.size() != k)
            throw ParseError(i + 1, "edge has " + std::to_string(tokens.size()) + " vertices, expected " +
                                        std::to_string(k));
        std::vector<Vertex> edge;
        for (auto t : tokens) {
            auto v = parse_uint(t, i + 1);
            if (v >= n) throw ParseError(i + 1, "vertex " + std::to_string(v) + " out of range (n = " + std::to_string(n) + ")");
            edge.push_back(static_cast<Vertex>(v));
        }
        try {
            builder->add_edge(edge);
        } catch (const InputError& e) {
            throw ParseError(i + 1, e.what());
        }
    }
    return std::move(*builder).build();
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

inline bool is_separator(std::string_view line) {
    auto tokens = split_ws(line);
    return tokens.size() == 1 && tokens[0] == "---";
}

} // namespace detail

inline KGraph parse_graph(std::string_view text) {
    auto lines = detail::split_lines(text);
    return detail::parse_lines(lines, 0, lines.size());
}

/// Header line then one edge per line, in the order the edges were added.
inline std::string serialize_graph(const KGraph& g) {
    std::string out = std::to_string(g.k()) + " " + std::to_string(g.n()) + "\n";
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto e = g.edge(i);
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (j) out += ' ';
            out += std::to_string(e[j]);
        }
        out += '\n';
    }
    return out;
}

inline std::vector<KGraph> parse_family(std::string_view text) {
    auto lines = detail::split_lines(text);
    std::vector<KGraph> family;
    std::size_t begin = 0;
    for (std::size_t i = 0; i <= lines.size(); ++i) {
        if (i < lines.size() && !detail::is_separator(lines[i])) continue;
        bool has_content = false;
        for (std::size_t j = begin; j < i; ++j) has_content |= !detail::is_comment_or_blank(lines[j]);
        if (has_content) family.push_back(detail::parse_lines(lines, begin, i));
        begin = i + 1;
    }
    return family;
}

inline std::string serialize_family(const std::vector<KGraph>& family) {
    std::string out;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i) out += "---\n";
        out += serialize_graph(family[i]);
    }
    return out;
}

} // namespace posdeg
