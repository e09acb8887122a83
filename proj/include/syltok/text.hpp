#pragma once

// UTF-8 text utilities: decoding, a focused NFC composition pass, grapheme
// clustering and case folding for the Latin and Cyrillic ranges this toolkit
// works with. Deliberately not a full Unicode implementation: composition and
// folding cover the precomposed letters that occur in the shipped language
// profiles and in typical European corpora, and grapheme clustering attaches
// combining marks to their base (no UAX #29 extended clusters).

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace syltok {

// ---------------------------------------------------------------------------
// UTF-8 encode/decode
// ---------------------------------------------------------------------------

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode_utf8(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) append_utf8(out, cp);
    return out;
}

/// Decodes UTF-8 into code points. Throws std::runtime_error on malformed
/// input; corpora are contractually UTF-8 and silent repair would break the
/// byte-exact round-trip guarantees.
inline std::vector<char32_t> decode_utf8(std::string_view s) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    size_t i = 0;
    auto bad = [&](size_t at) -> std::runtime_error {
        return std::runtime_error("invalid UTF-8 at byte " + std::to_string(at));
    };
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            cps.push_back(b0);
            ++i;
            continue;
        }
        int len;
        char32_t cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            throw bad(i);
        }
        if (i + len > s.size()) throw bad(i);
        for (int k = 1; k < len; ++k) {
            unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) throw bad(i + k);
            cp = (cp << 6) | (b & 0x3F);
        }
        // reject overlong forms and surrogates
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
            cp > 0x10FFFF) {
            throw bad(i);
        }
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

// ---------------------------------------------------------------------------
// Character classes
// ---------------------------------------------------------------------------

inline bool is_combining_mark(char32_t cp) {
    return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x0483 && cp <= 0x0489) ||
           (cp >= 0x1AB0 && cp <= 0x1AFF) || (cp >= 0x1DC0 && cp <= 0x1DFF) ||
           (cp >= 0x20D0 && cp <= 0x20FF) || (cp >= 0xFE20 && cp <= 0xFE2F);
}

inline bool is_space(char32_t cp) {
    switch (cp) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

/// Approximate letter test: ASCII letters plus the letter blocks from Latin-1
/// Supplement upward, excluding general punctuation. Good enough to decide
/// whether a corpus token is a hyphenatable word.
inline bool is_letter(char32_t cp) {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    if (is_combining_mark(cp)) return true;
    if (cp >= 0x00C0 && cp < 0x2000) return cp != 0x00D7 && cp != 0x00F7;
    if (cp >= 0x2C00 && cp < 0xD800) return true;
    if (cp >= 0xF900 && cp < 0xFFF0) return true;
    return cp >= 0x10000;
}

// ---------------------------------------------------------------------------
// NFC composition (table-driven subset)
// ---------------------------------------------------------------------------

namespace detail {

struct Composition {
    char32_t base;
    char32_t mark;
    char32_t composed;
};

// Pairs actually produced by Latin/Cyrillic keyboards and corpora in the
// supported languages. Sorted lookup not needed at this size.
inline const std::vector<Composition>& composition_table() {
    static const std::vector<Composition> table = {
        // grave
        {U'A', 0x300, 0x00C0}, {U'E', 0x300, 0x00C8}, {U'I', 0x300, 0x00CC},
        {U'O', 0x300, 0x00D2}, {U'U', 0x300, 0x00D9},
        {U'a', 0x300, 0x00E0}, {U'e', 0x300, 0x00E8}, {U'i', 0x300, 0x00EC},
        {U'o', 0x300, 0x00F2}, {U'u', 0x300, 0x00F9},
        // acute
        {U'A', 0x301, 0x00C1}, {U'E', 0x301, 0x00C9}, {U'I', 0x301, 0x00CD},
        {U'O', 0x301, 0x00D3}, {U'U', 0x301, 0x00DA}, {U'Y', 0x301, 0x00DD},
        {U'a', 0x301, 0x00E1}, {U'e', 0x301, 0x00E9}, {U'i', 0x301, 0x00ED},
        {U'o', 0x301, 0x00F3}, {U'u', 0x301, 0x00FA}, {U'y', 0x301, 0x00FD},
        {U'C', 0x301, 0x0106}, {U'c', 0x301, 0x0107},
        {U'N', 0x301, 0x0143}, {U'n', 0x301, 0x0144},
        {U'S', 0x301, 0x015A}, {U's', 0x301, 0x015B},
        {U'Z', 0x301, 0x0179}, {U'z', 0x301, 0x017A},
        {U'L', 0x301, 0x0139}, {U'l', 0x301, 0x013A},
        {U'R', 0x301, 0x0154}, {U'r', 0x301, 0x0155},
        // circumflex
        {U'A', 0x302, 0x00C2}, {U'E', 0x302, 0x00CA}, {U'I', 0x302, 0x00CE},
        {U'O', 0x302, 0x00D4}, {U'U', 0x302, 0x00DB},
        {U'a', 0x302, 0x00E2}, {U'e', 0x302, 0x00EA}, {U'i', 0x302, 0x00EE},
        {U'o', 0x302, 0x00F4}, {U'u', 0x302, 0x00FB},
        // tilde
        {U'A', 0x303, 0x00C3}, {U'N', 0x303, 0x00D1}, {U'O', 0x303, 0x00D5},
        {U'a', 0x303, 0x00E3}, {U'n', 0x303, 0x00F1}, {U'o', 0x303, 0x00F5},
        {U'I', 0x303, 0x0128}, {U'i', 0x303, 0x0129},
        {U'U', 0x303, 0x0168}, {U'u', 0x303, 0x0169},
        // macron
        {U'A', 0x304, 0x0100}, {U'a', 0x304, 0x0101},
        {U'E', 0x304, 0x0112}, {U'e', 0x304, 0x0113},
        {U'I', 0x304, 0x012A}, {U'i', 0x304, 0x012B},
        {U'O', 0x304, 0x014C}, {U'o', 0x304, 0x014D},
        {U'U', 0x304, 0x016A}, {U'u', 0x304, 0x016B},
        // breve
        {U'A', 0x306, 0x0102}, {U'a', 0x306, 0x0103},
        {U'G', 0x306, 0x011E}, {U'g', 0x306, 0x011F},
        {0x0418, 0x306, 0x0419}, {0x0438, 0x306, 0x0439},  // Й й
        // dot above
        {U'I', 0x307, 0x0130},
        {U'E', 0x307, 0x0116}, {U'e', 0x307, 0x0117},
        {U'Z', 0x307, 0x017B}, {U'z', 0x307, 0x017C},
        // diaeresis
        {U'A', 0x308, 0x00C4}, {U'E', 0x308, 0x00CB}, {U'I', 0x308, 0x00CF},
        {U'O', 0x308, 0x00D6}, {U'U', 0x308, 0x00DC},
        {U'a', 0x308, 0x00E4}, {U'e', 0x308, 0x00EB}, {U'i', 0x308, 0x00EF},
        {U'o', 0x308, 0x00F6}, {U'u', 0x308, 0x00FC},
        {U'y', 0x308, 0x00FF}, {U'Y', 0x308, 0x0178},
        {0x0415, 0x308, 0x0401}, {0x0435, 0x308, 0x0451},  // Ё ё
        // ring above
        {U'A', 0x30A, 0x00C5}, {U'a', 0x30A, 0x00E5},
        {U'U', 0x30A, 0x016E}, {U'u', 0x30A, 0x016F},
        // double acute
        {U'O', 0x30B, 0x0150}, {U'o', 0x30B, 0x0151},
        {U'U', 0x30B, 0x0170}, {U'u', 0x30B, 0x0171},
        // caron
        {U'C', 0x30C, 0x010C}, {U'c', 0x30C, 0x010D},
        {U'D', 0x30C, 0x010E}, {U'd', 0x30C, 0x010F},
        {U'E', 0x30C, 0x011A}, {U'e', 0x30C, 0x011B},
        {U'N', 0x30C, 0x0147}, {U'n', 0x30C, 0x0148},
        {U'R', 0x30C, 0x0158}, {U'r', 0x30C, 0x0159},
        {U'S', 0x30C, 0x0160}, {U's', 0x30C, 0x0161},
        {U'T', 0x30C, 0x0164}, {U't', 0x30C, 0x0165},
        {U'Z', 0x30C, 0x017D}, {U'z', 0x30C, 0x017E},
        // cedilla
        {U'C', 0x327, 0x00C7}, {U'c', 0x327, 0x00E7},
        {U'G', 0x327, 0x0122}, {U'g', 0x327, 0x0123},
        {U'S', 0x327, 0x015E}, {U's', 0x327, 0x015F},
        {U'T', 0x327, 0x0162}, {U't', 0x327, 0x0163},
        // ogonek
        {U'A', 0x328, 0x0104}, {U'a', 0x328, 0x0105},
        {U'E', 0x328, 0x0118}, {U'e', 0x328, 0x0119},
    };
    return table;
}

inline const std::unordered_map<uint64_t, char32_t>& composition_map() {
    static const std::unordered_map<uint64_t, char32_t> map = [] {
        std::unordered_map<uint64_t, char32_t> m;
        for (const auto& c : composition_table()) {
            m.emplace((static_cast<uint64_t>(c.base) << 32) | c.mark, c.composed);
        }
        return m;
    }();
    return map;
}

}  // namespace detail

/// Composes base + combining-mark sequences into precomposed code points
/// where the table knows the pair. Marks without a composition stay attached
/// as combining characters (grapheme clustering keeps them with their base).
inline std::string nfc(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);
    std::vector<char32_t> out;
    out.reserve(cps.size());
    const auto& map = detail::composition_map();
    for (char32_t cp : cps) {
        if (!out.empty() && is_combining_mark(cp)) {
            uint64_t key = (static_cast<uint64_t>(out.back()) << 32) | cp;
            auto it = map.find(key);
            if (it != map.end()) {
                out.back() = it->second;
                continue;
            }
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

// ---------------------------------------------------------------------------
// Grapheme clusters
// ---------------------------------------------------------------------------

/// Splits a UTF-8 string into grapheme clusters: one base code point plus any
/// trailing combining marks. Input is not normalized here; call nfc() first
/// when composed forms are wanted.
inline std::vector<std::string> graphemes(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);
    std::vector<std::string> out;
    size_t i = 0;
    while (i < cps.size()) {
        std::string g;
        append_utf8(g, cps[i]);
        ++i;
        while (i < cps.size() && is_combining_mark(cps[i])) {
            append_utf8(g, cps[i]);
            ++i;
        }
        out.push_back(std::move(g));
    }
    return out;
}

inline size_t grapheme_count(std::string_view s) { return graphemes(s).size(); }

// ---------------------------------------------------------------------------
// Case folding
// ---------------------------------------------------------------------------

inline char32_t to_lower_cp(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
    if (cp == 0x0130) return U'i';  // İ -> i (dot dropped; see header note)
    if (cp >= 0x0100 && cp <= 0x0137) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x0139 && cp <= 0x0148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x014A && cp <= 0x0177) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp == 0x0178) return 0x00FF;
    if (cp >= 0x0179 && cp <= 0x017E) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 0x20;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 0x50;
    return cp;
}

inline std::string to_lower(std::string_view s) {
    std::vector<char32_t> cps = decode_utf8(s);
    for (char32_t& cp : cps) cp = to_lower_cp(cp);
    return encode_utf8(cps);
}

// ---------------------------------------------------------------------------
// Tokenization helpers
// ---------------------------------------------------------------------------

/// Splits a line into words on Unicode whitespace. Punctuation stays attached
/// to its word; the toolkit does not tokenize beyond whitespace.
inline std::vector<std::string> split_words(std::string_view line) {
    std::vector<char32_t> cps = decode_utf8(line);
    std::vector<std::string> words;
    std::string cur;
    for (char32_t cp : cps) {
        if (is_space(cp)) {
            if (!cur.empty()) {
                words.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            append_utf8(cur, cp);
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

inline std::string join(const std::vector<std::string>& pieces, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i) out += sep;
        out += pieces[i];
    }
    return out;
}

}  // namespace syltok
