#pragma once

// Liang-style pattern hyphenation, the syllabification proxy for languages
// without a rule-based tool. Pattern semantics follow the TeX/Hunspell
// convention: keys carry interleaved digit weights, the word (wrapped in `.`
// boundary markers) collects the pointwise maximum over all matching
// patterns, and odd maxima mark break points.

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syltok/syllabifier.hpp"
#include "syltok/text.hpp"

namespace syltok {

/// Compiled hyphenation patterns plus exceptions for one language.
struct PatternSet {
    struct Pattern {
        std::vector<std::string> key;  // graphemes, may start/end with "."
        std::vector<int> weights;      // key.size() + 1 entries
    };
    std::vector<Pattern> patterns;
    // full word -> break positions (grapheme index the break precedes)
    std::map<std::string, std::vector<size_t>> exceptions;
    size_t min_left = 2;
    size_t min_right = 2;
    std::string language_id;
};

namespace detail {

inline bool is_ascii_digit(const std::string& g) {
    return g.size() == 1 && g[0] >= '0' && g[0] <= '9';
}

inline void parse_pattern_token(const std::string& token, size_t lineno, PatternSet& ps) {
    if (token.find('-') != std::string::npos) {
        // exception: word with explicit break marks
        std::string word;
        std::vector<size_t> breaks;
        for (const auto& g : graphemes(to_lower(nfc(token)))) {
            if (g == "-") {
                if (word.empty())
                    throw std::runtime_error("pattern line " + std::to_string(lineno) +
                                             ": exception starts with '-'");
                breaks.push_back(grapheme_count(word));
            } else {
                word += g;
            }
        }
        if (word.empty())
            throw std::runtime_error("pattern line " + std::to_string(lineno) +
                                     ": empty exception");
        ps.exceptions[word] = breaks;
        return;
    }

    PatternSet::Pattern pat;
    std::vector<std::string> gs = graphemes(to_lower(nfc(token)));
    int next_weight = 0;
    for (const auto& g : gs) {
        if (is_ascii_digit(g)) {
            next_weight = g[0] - '0';
        } else {
            pat.key.push_back(g);
            pat.weights.push_back(next_weight);
            next_weight = 0;
        }
    }
    pat.weights.push_back(next_weight);
    if (pat.key.empty() || (pat.key.size() == 1 && pat.key[0] == "."))
        throw std::runtime_error("pattern line " + std::to_string(lineno) +
                                 ": empty pattern key in '" + token + "'");
    // weights may not sit outside the boundary markers
    if ((pat.key.front() == "." && pat.weights.front() != 0) ||
        (pat.key.back() == "." && pat.weights.back() != 0))
        throw std::runtime_error("pattern line " + std::to_string(lineno) +
                                 ": digit outside boundary marker in '" + token + "'");
    ps.patterns.push_back(std::move(pat));
}

}  // namespace detail

/// Parses a pattern document: `%` comments, optional \patterns{...} /
/// \hyphenation{...} wrappers (stripped), whitespace-separated tokens, one
/// or more per line. Tokens containing `-` are exceptions. Errors carry the
/// line number.
inline PatternSet parse_patterns(std::istream& in, std::string language_id = "") {
    PatternSet ps;
    ps.language_id = std::move(language_id);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('%'); pos != std::string::npos) line.resize(pos);
        for (char& c : line)
            if (c == '{' || c == '}') c = ' ';
        for (std::string& tok : split_words(line)) {
            if (tok[0] == '\\') continue;  // \patterns, \hyphenation
            detail::parse_pattern_token(tok, lineno, ps);
        }
    }
    return ps;
}

inline PatternSet parse_patterns(const std::string& text, std::string language_id = "") {
    std::istringstream in(text);
    return parse_patterns(in, std::move(language_id));
}

/// Hyphenates one word. Exceptions override patterns; breaks inside the
/// min_left/min_right margins are suppressed in both paths; words containing
/// non-letters come back whole. Never fails: a word with no applicable break
/// is a single piece.
inline SyllabifiedWord hyphenate(std::string_view raw, const PatternSet& ps) {
    std::string word = nfc(raw);
    if (word.empty()) throw std::invalid_argument("hyphenate: empty word");
    std::vector<std::string> gs = graphemes(word);
    size_t n = gs.size();

    SyllabifiedWord out;
    out.word = word;
    out.method = SegmentationMethod::hyphenation;

    auto whole = [&]() {
        out.syllables = {word};
        return out;
    };

    for (const auto& g : gs) {
        std::vector<char32_t> cps = decode_utf8(g);
        if (cps.empty() || !is_letter(cps[0])) return whole();
    }
    if (n < ps.min_left + ps.min_right) return whole();

    std::vector<std::string> lower(n);
    for (size_t i = 0; i < n; ++i) lower[i] = to_lower(gs[i]);
    std::string lower_word = join(lower, "");

    std::vector<bool> brk(n, false);  // break before grapheme i
    if (auto it = ps.exceptions.find(lower_word); it != ps.exceptions.end()) {
        for (size_t pos : it->second)
            if (pos >= ps.min_left && pos + ps.min_right <= n) brk[pos] = true;
    } else {
        // augmented word: . g0 g1 ... g(n-1) .
        std::vector<std::string> aug;
        aug.reserve(n + 2);
        aug.push_back(".");
        aug.insert(aug.end(), lower.begin(), lower.end());
        aug.push_back(".");
        // scores[j]: weight of the gap before aug[j]
        std::vector<int> scores(aug.size() + 1, 0);
        for (const auto& pat : ps.patterns) {
            size_t k = pat.key.size();
            if (k > aug.size()) continue;
            for (size_t start = 0; start + k <= aug.size(); ++start) {
                bool match = true;
                for (size_t i = 0; i < k; ++i)
                    if (aug[start + i] != pat.key[i]) { match = false; break; }
                if (!match) continue;
                for (size_t i = 0; i <= k; ++i)
                    scores[start + i] = std::max(scores[start + i], pat.weights[i]);
            }
        }
        // gap before original grapheme i sits before aug[i + 1]
        for (size_t i = ps.min_left; i + ps.min_right <= n; ++i)
            if (scores[i + 1] % 2 == 1) brk[i] = true;
    }

    std::string piece;
    for (size_t i = 0; i < n; ++i) {
        if (brk[i] && !piece.empty()) {
            out.syllables.push_back(std::move(piece));
            piece.clear();
        }
        piece += gs[i];
    }
    if (!piece.empty()) out.syllables.push_back(std::move(piece));
    return out;
}

}  // namespace syltok
