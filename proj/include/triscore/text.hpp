#pragma once
// Small string helpers shared by the scoring modules. ASCII-only case
// folding: bytes >= 0x80 are passed through untouched, so UTF-8 input
// stays valid.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triscore {

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
    return s.substr(b, e - b);
}

// Whitespace-separated fields (spaces and tabs), empty fields skipped.
inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Locale-independent double parse of the whole string; trailing characters
// make it fail.
inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

// Shortest decimal form that parses back to the same bits.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, static_cast<size_t>(ptr - buf));
}

// Splits on a single separator, keeping empty fields (TSV semantics).
inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// Permissive UTF-8 decoding: malformed bytes decode as themselves.
inline std::vector<uint32_t> utf8_codepoints(std::string_view s) {
    std::vector<uint32_t> cps;
    cps.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        size_t extra = 0;
        uint32_t cp = b;
        if ((b & 0x80u) == 0x00u)      { extra = 0; cp = b; }
        else if ((b & 0xE0u) == 0xC0u) { extra = 1; cp = b & 0x1Fu; }
        else if ((b & 0xF0u) == 0xE0u) { extra = 2; cp = b & 0x0Fu; }
        else if ((b & 0xF8u) == 0xF0u) { extra = 3; cp = b & 0x07u; }
        if (extra > 0 && i + extra >= s.size()) {
            cps.push_back(b);  // truncated sequence
            ++i;
            continue;
        }
        bool ok = true;
        for (size_t k = 1; k <= extra; ++k) {
            unsigned char c = static_cast<unsigned char>(s[i + k]);
            if ((c & 0xC0u) != 0x80u) { ok = false; break; }
            cp = (cp << 6) | (c & 0x3Fu);
        }
        if (!ok) {
            cps.push_back(b);
            ++i;
        } else {
            cps.push_back(cp);
            i += extra + 1;
        }
    }
    return cps;
}

inline size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Edit distance divided by the longer length, over codepoints. 0 for two
// empty strings.
inline double normalized_levenshtein(std::string_view a, std::string_view b) {
    auto ca = utf8_codepoints(a);
    auto cb = utf8_codepoints(b);
    size_t longest = std::max(ca.size(), cb.size());
    if (longest == 0) return 0.0;
    return static_cast<double>(levenshtein(ca, cb)) / static_cast<double>(longest);
}

// Substring after the last '#' or '/', the usual IRI local-name heuristic.
inline std::string local_name(std::string_view iri) {
    size_t pos = iri.find_last_of("#/");
    if (pos == std::string_view::npos || pos + 1 >= iri.size()) return std::string(iri);
    return std::string(iri.substr(pos + 1));
}

}  // namespace triscore
