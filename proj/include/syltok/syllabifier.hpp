#pragma once

// Rule-based syllabification. A LanguageProfile declares the phonology
// (vowels, diphthongs, digraphs, legal onsets and codas) and syllabify()
// runs nucleus detection followed by maximal-onset consonant assignment.
// English gets its own heuristic engine (syllabify_english) because English
// orthography does not reduce to an onset/coda table.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syltok/bpe.hpp"
#include "syltok/text.hpp"

namespace syltok {

enum class SegmentationMethod {
    profile,
    english_rules,
    hyphenation,
    fallback_chars,
    fallback_bpe,
};

/// A word together with its ordered syllable pieces. Pieces concatenate back
/// to `word` exactly (word is stored NFC-normalized).
struct SyllabifiedWord {
    std::string word;
    std::vector<std::string> syllables;
    SegmentationMethod method = SegmentationMethod::profile;
};

// ---------------------------------------------------------------------------
// LanguageProfile
// ---------------------------------------------------------------------------

/// Declarative syllabification rules for one language. All graphemes are
/// stored lowercase; matching is case-insensitive, output case-preserving.
struct LanguageProfile {
    std::string language_id;
    std::set<std::string> vowels;                       // single graphemes
    std::set<std::pair<std::string, std::string>> diphthongs;
    std::set<std::string> hiatus_vowels;                // refuse to join a nucleus pair
    std::vector<std::string> digraphs;                  // multi-grapheme consonants, longest first
    std::set<std::vector<std::string>> valid_onsets;    // sequences of consonant units
    std::set<std::vector<std::string>> valid_codas;
    std::set<std::string> consonants;                   // derived: digraphs + singles

    bool is_vowel(const std::string& g) const { return vowels.count(g) != 0; }

    bool nucleus_pair(const std::string& a, const std::string& b) const {
        return diphthongs.count({a, b}) != 0 && hiatus_vowels.count(a) == 0 &&
               hiatus_vowels.count(b) == 0;
    }
};

namespace detail {

inline std::vector<std::string> strip_comment_and_split(const std::string& line) {
    std::string body = line;
    if (auto pos = body.find('#'); pos != std::string::npos) body.resize(pos);
    return split_words(body);
}

// Splits a rule token such as "chr" into consonant units [ch, r] using the
// profile's digraph list, longest digraph first.
inline std::vector<std::string> split_units(const std::string& token,
                                            const std::vector<std::string>& digraphs) {
    std::vector<std::string> gs = graphemes(token);
    std::vector<std::string> units;
    size_t i = 0;
    while (i < gs.size()) {
        bool matched = false;
        for (const auto& d : digraphs) {
            std::vector<std::string> dg = graphemes(d);
            if (dg.size() > 1 && i + dg.size() <= gs.size()) {
                bool eq = true;
                for (size_t k = 0; k < dg.size(); ++k) {
                    if (gs[i + k] != dg[k]) { eq = false; break; }
                }
                if (eq) {
                    units.push_back(d);
                    i += dg.size();
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            units.push_back(gs[i]);
            ++i;
        }
    }
    return units;
}

}  // namespace detail

/// Parses a profile document (sections: vowels, diphthongs, hiatus, digraphs,
/// onsets, codas; `#` comments; optional `language` key) and validates every
/// profile invariant. Throws std::runtime_error naming the offending field.
inline LanguageProfile load_profile(std::istream& in, std::string default_id = "") {
    LanguageProfile p;
    p.language_id = std::move(default_id);

    std::map<std::string, std::vector<std::string>> sections;
    std::string line;
    bool saw_any = false;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> toks = detail::strip_comment_and_split(line);
        if (toks.empty()) continue;
        saw_any = true;
        std::string key = toks.front();
        if (key == "language") {
            if (toks.size() != 2)
                throw std::runtime_error("profile line " + std::to_string(lineno) +
                                         ": language takes exactly one value");
            p.language_id = toks[1];
            continue;
        }
        if (key != "vowels" && key != "diphthongs" && key != "hiatus" &&
            key != "digraphs" && key != "onsets" && key != "codas") {
            throw std::runtime_error("profile line " + std::to_string(lineno) +
                                     ": unknown section '" + key + "'");
        }
        auto& dst = sections[key];
        dst.insert(dst.end(), toks.begin() + 1, toks.end());
    }
    if (!saw_any) throw std::runtime_error("profile: empty document");
    if (sections["vowels"].empty())
        throw std::runtime_error("profile: section 'vowels' is required");

    auto lower_all = [](std::vector<std::string>& v) {
        for (auto& s : v) s = to_lower(nfc(s));
    };
    for (auto& [k, v] : sections) lower_all(v);

    for (const auto& v : sections["vowels"]) {
        if (grapheme_count(v) != 1)
            throw std::runtime_error("profile: vowels entry '" + v +
                                     "' is not a single grapheme");
        p.vowels.insert(v);
    }

    for (const auto& d : sections["digraphs"]) {
        std::vector<std::string> gs = graphemes(d);
        if (gs.size() < 2)
            throw std::runtime_error("profile: digraphs entry '" + d +
                                     "' must span several graphemes");
        if (p.vowels.count(d))
            throw std::runtime_error("profile: digraph '" + d + "' is also a vowel");
        bool all_vowels = true;
        for (const auto& g : gs)
            if (!p.vowels.count(g)) { all_vowels = false; break; }
        if (all_vowels)
            throw std::runtime_error("profile: digraph '" + d +
                                     "' consists only of vowel graphemes (vowels and "
                                     "consonants must be disjoint)");
        p.digraphs.push_back(d);
    }
    std::sort(p.digraphs.begin(), p.digraphs.end(),
              [](const std::string& a, const std::string& b) {
                  size_t la = grapheme_count(a), lb = grapheme_count(b);
                  return la != lb ? la > lb : a < b;
              });

    for (const auto& t : sections["diphthongs"]) {
        std::vector<std::string> gs = graphemes(t);
        if (gs.size() != 2)
            throw std::runtime_error("profile: diphthongs entry '" + t +
                                     "' must be exactly two graphemes");
        for (const auto& g : gs)
            if (!p.vowels.count(g))
                throw std::runtime_error("profile: diphthong member '" + g +
                                         "' in '" + t + "' is not a vowel");
        p.diphthongs.insert({gs[0], gs[1]});
    }

    for (const auto& h : sections["hiatus"]) {
        if (!p.vowels.count(h))
            throw std::runtime_error("profile: hiatus entry '" + h + "' is not a vowel");
        p.hiatus_vowels.insert(h);
    }

    auto add_cluster = [&](const std::string& tok, const char* field,
                           std::set<std::vector<std::string>>& dst) {
        std::vector<std::string> units = detail::split_units(tok, p.digraphs);
        for (const auto& u : units) {
            if (p.vowels.count(u))
                throw std::runtime_error(std::string("profile: ") + field + " entry '" +
                                         tok + "' contains vowel grapheme '" + u + "'");
            p.consonants.insert(u);
        }
        dst.insert(units);
    };
    for (const auto& t : sections["onsets"]) add_cluster(t, "onsets", p.valid_onsets);
    for (const auto& t : sections["codas"]) add_cluster(t, "codas", p.valid_codas);
    for (const auto& d : p.digraphs) p.consonants.insert(d);

    // the empty onset and coda are always legal
    p.valid_onsets.insert(std::vector<std::string>{});
    p.valid_codas.insert(std::vector<std::string>{});

    for (const auto& c : p.consonants) {
        if (!p.valid_onsets.count({c}))
            throw std::runtime_error("profile: onsets missing single consonant '" + c +
                                     "'");
    }
    return p;
}

inline LanguageProfile load_profile(const std::string& text, std::string default_id = "") {
    std::istringstream in(text);
    return load_profile(in, std::move(default_id));
}

// ---------------------------------------------------------------------------
// Profile-driven syllabification
// ---------------------------------------------------------------------------

namespace detail {

struct Unit {
    std::string lower;   // matched form
    size_t begin, end;   // grapheme span in the original word
    bool vowel;
};

// Parses the word into profile units (digraph-greedy) or fails when a
// grapheme is outside the profile alphabet.
inline std::optional<std::vector<Unit>> parse_units(const std::vector<std::string>& lower,
                                                    const LanguageProfile& p) {
    std::vector<Unit> units;
    size_t i = 0;
    while (i < lower.size()) {
        bool matched = false;
        for (const auto& d : p.digraphs) {
            std::vector<std::string> dg = graphemes(d);
            if (i + dg.size() <= lower.size()) {
                bool eq = true;
                for (size_t k = 0; k < dg.size(); ++k)
                    if (lower[i + k] != dg[k]) { eq = false; break; }
                if (eq) {
                    units.push_back({d, i, i + dg.size(), false});
                    i += dg.size();
                    matched = true;
                    break;
                }
            }
        }
        if (matched) continue;
        const std::string& g = lower[i];
        if (p.vowels.count(g)) {
            units.push_back({g, i, i + 1, true});
        } else if (p.consonants.count(g)) {
            units.push_back({g, i, i + 1, false});
        } else {
            return std::nullopt;  // digit, punctuation or foreign letter
        }
        ++i;
    }
    return units;
}

inline bool in_set(const std::set<std::vector<std::string>>& set,
                   const std::vector<Unit>& units, size_t from, size_t to) {
    std::vector<std::string> seq;
    seq.reserve(to - from);
    for (size_t i = from; i < to; ++i) seq.push_back(units[i].lower);
    return set.count(seq) != 0;
}

}  // namespace detail

/// Syllabifies `word` with the profile's rules: group vowels into nuclei
/// (greedy diphthong pairing, hiatus vowels never pair), then split each
/// inter-nucleus consonant cluster by assigning the longest legal onset to
/// the right while the remainder forms a legal coda on the left. Returns
/// nullopt (NotSyllabifiable) when the word has no profile vowel, contains a
/// grapheme outside the profile alphabet, or a cluster admits no legal split.
inline std::optional<SyllabifiedWord> syllabify(std::string_view raw,
                                                const LanguageProfile& p) {
    std::string word = nfc(raw);
    std::vector<std::string> gs = graphemes(word);
    if (gs.empty()) throw std::invalid_argument("syllabify: empty word");
    std::vector<std::string> lower;
    lower.reserve(gs.size());
    for (const auto& g : gs) lower.push_back(to_lower(g));

    auto parsed = detail::parse_units(lower, p);
    if (!parsed) return std::nullopt;
    const std::vector<detail::Unit>& units = *parsed;

    // Nuclei: indices into `units`, each nucleus spanning one vowel or a
    // diphthong pair.
    struct Nucleus { size_t from, to; };
    std::vector<Nucleus> nuclei;
    for (size_t i = 0; i < units.size();) {
        if (!units[i].vowel) { ++i; continue; }
        if (i + 1 < units.size() && units[i + 1].vowel &&
            p.nucleus_pair(units[i].lower, units[i + 1].lower)) {
            nuclei.push_back({i, i + 2});
            i += 2;
        } else {
            nuclei.push_back({i, i + 1});
            ++i;
        }
    }
    if (nuclei.empty()) return std::nullopt;

    // Boundary before the first nucleus: everything is the first onset.
    if (!detail::in_set(p.valid_onsets, units, 0, nuclei.front().from))
        return std::nullopt;
    // After the last nucleus: everything is the last coda.
    if (nuclei.back().to < units.size() &&
        !detail::in_set(p.valid_codas, units, nuclei.back().to, units.size()))
        return std::nullopt;

    // For each inter-nucleus cluster pick the split with the maximal onset.
    std::vector<size_t> cuts;  // unit index where syllable k+1 starts
    for (size_t k = 0; k + 1 < nuclei.size(); ++k) {
        size_t lo = nuclei[k].to, hi = nuclei[k + 1].from;
        bool found = false;
        for (size_t cut = lo; cut <= hi && !found; ++cut) {
            // onset grows as cut moves left; scan from the leftmost cut
            if (detail::in_set(p.valid_onsets, units, cut, hi) &&
                detail::in_set(p.valid_codas, units, lo, cut)) {
                cuts.push_back(cut);
                found = true;
            }
        }
        if (!found) return std::nullopt;
    }

    SyllabifiedWord out;
    out.word = word;
    out.method = SegmentationMethod::profile;
    size_t start_unit = 0;
    for (size_t k = 0; k < nuclei.size(); ++k) {
        size_t end_unit = (k + 1 < nuclei.size()) ? cuts[k] : units.size();
        size_t gfrom = units[start_unit].begin;
        size_t gto = (end_unit == units.size()) ? gs.size() : units[end_unit].begin;
        std::string piece;
        for (size_t i = gfrom; i < gto; ++i) piece += gs[i];
        out.syllables.push_back(std::move(piece));
        start_unit = end_unit;
    }
    return out;
}

// ---------------------------------------------------------------------------
// English heuristic rules
// ---------------------------------------------------------------------------
//
// Five rules over ASCII orthography:
//   1. VC-CV: split between two consonants flanked by vowels, unless the pair
//      is a digraph (ch, sh, th, ph, wh) or a legal onset (then V-CCV).
//   2. V-CV: a lone consonant between vowels starts the next syllable.
//   3. Final consonant+"le" forms its own syllable (ta-ble, sin-gle).
//   4. Compound words split at the component boundary when both halves are in
//      the caller-supplied word list.
//   5. A fixed suffix list (and, with a word list, prefix list) splits off
//      first.
// Nucleus support: y is a vowel between consonants, vowel teams (ai, ea, ow,
// ...) form one nucleus, and a final silent e is not a nucleus.

namespace detail::en {

inline bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline const std::set<std::string>& digraphs() {
    static const std::set<std::string> s = {"ch", "sh", "th", "ph", "wh"};
    return s;
}

inline const std::set<std::string>& onsets2() {
    static const std::set<std::string> s = {
        "bl", "br", "cl", "cr", "dr", "fl", "fr", "gl", "gr", "pl", "pr",
        "sc", "sk", "sl", "sm", "sn", "sp", "st", "sw", "tr", "tw", "wr"};
    return s;
}

inline const std::set<std::string>& onsets3() {
    static const std::set<std::string> s = {"chr", "sch", "scr", "shr", "spl",
                                            "spr", "squ", "str", "thr"};
    return s;
}

// Unconditional vowel teams; aw/ew only join when not followed by a vowel.
inline const std::set<std::string>& teams() {
    static const std::set<std::string> s = {"ai", "au", "ay", "ea", "ee", "ei",
                                            "eu", "ey", "ie", "oa", "oe", "oi",
                                            "oo", "ou", "ow", "oy", "ue", "ui",
                                            "uy"};
    return s;
}

struct Analysis {
    std::string low;              // lowercase word part
    std::vector<bool> is_nucleus; // per char: belongs to a nucleus
};

// Marks nucleus characters: vowels, contextual y, vowel teams, silent final e.
inline Analysis analyze(const std::string& low) {
    size_t n = low.size();
    Analysis a{low, std::vector<bool>(n, false)};
    auto vowelish = [&](size_t i) {
        if (is_vowel_letter(low[i])) return true;
        if (low[i] != 'y') return false;
        bool prev_c = i > 0 && !is_vowel_letter(low[i - 1]);
        bool next_c = i + 1 >= n || !is_vowel_letter(low[i + 1]);
        return prev_c && next_c;
    };
    for (size_t i = 0; i < n; ++i) a.is_nucleus[i] = vowelish(i);

    // y and w as second team member (ay, ow, ...)
    for (size_t i = 0; i + 1 < n; ++i) {
        if (!a.is_nucleus[i]) continue;
        char c2 = low[i + 1];
        std::string pair{low[i], c2};
        if (teams().count(pair)) {
            a.is_nucleus[i + 1] = true;
        } else if ((pair == "aw" || pair == "ew") &&
                   (i + 2 >= n || !is_vowel_letter(low[i + 2]))) {
            a.is_nucleus[i + 1] = true;
        }
    }

    // silent final e: not a nucleus when the word has another one
    if (n >= 2 && low[n - 1] == 'e' && !a.is_nucleus[n - 2]) {
        bool other = false;
        for (size_t i = 0; i + 1 < n; ++i)
            if (a.is_nucleus[i]) { other = true; break; }
        if (other) a.is_nucleus[n - 1] = false;
    }
    return a;
}

// Nucleus groups (maximal runs of nucleus chars, split teams greedily).
inline std::vector<std::pair<size_t, size_t>> nuclei(const Analysis& a) {
    std::vector<std::pair<size_t, size_t>> out;
    size_t n = a.low.size();
    size_t i = 0;
    while (i < n) {
        if (!a.is_nucleus[i]) { ++i; continue; }
        size_t run_end = i;
        while (run_end < n && a.is_nucleus[run_end]) ++run_end;
        // within the run, pair greedily via the team list
        size_t j = i;
        while (j < run_end) {
            if (j + 1 < run_end) {
                std::string pair{a.low[j], a.low[j + 1]};
                bool team = teams().count(pair) || pair == "aw" || pair == "ew";
                if (team) {
                    out.push_back({j, j + 2});
                    j += 2;
                    continue;
                }
            }
            // w only carries a nucleus as a team tail; absorb a stray one
            // into the preceding group instead of letting it stand alone
            if (a.low[j] == 'w' && !out.empty() && out.back().second == j) {
                ++out.back().second;
            } else {
                out.push_back({j, j + 1});
            }
            ++j;
        }
        i = run_end;
    }
    return out;
}

// Core VC-CV / V-CV splitting on one word part; returns cut positions.
inline std::vector<size_t> core_cuts(const std::string& low) {
    Analysis a = analyze(low);
    auto ns = nuclei(a);
    std::vector<size_t> cuts;
    for (size_t k = 0; k + 1 < ns.size(); ++k) {
        size_t lo = ns[k].second, hi = ns[k + 1].first;
        size_t m = hi - lo;  // consonants between the nuclei
        if (m == 0) {
            cuts.push_back(lo);
        } else if (m == 1) {
            cuts.push_back(lo);  // V-CV
        } else {
            std::string last2 = low.substr(hi - 2, 2);
            if (m == 2 && (digraphs().count(last2) || onsets2().count(last2))) {
                cuts.push_back(lo);  // V-CCV
            } else if (m >= 3 && onsets3().count(low.substr(hi - 3, 3))) {
                cuts.push_back(hi - 3);
            } else if (digraphs().count(last2) || onsets2().count(last2)) {
                cuts.push_back(hi - 2);
            } else {
                cuts.push_back(hi - 1);  // VC-CV
            }
        }
    }
    return cuts;
}

inline bool has_vowel_letter(const std::string& low) {
    for (char c : low)
        if (is_vowel_letter(c) || c == 'y') return true;
    return false;
}

inline const std::vector<std::string>& suffixes() {
    static const std::vector<std::string> s = {"tion", "sion", "ment", "ness",
                                               "less", "ful",  "ing",  "ed",
                                               "ly"};
    return s;
}

inline const std::vector<std::string>& prefixes() {
    static const std::vector<std::string> s = {"under", "over", "anti", "dis",
                                               "mis",   "non",  "sub",  "un"};
    return s;
}

struct Parts {
    std::vector<std::pair<size_t, size_t>> spans;
    bool last_atomic = false;  // a split-off suffix is one syllable already
};

// Splits `low` into rule-5/rule-4 parts; each non-atomic part is then
// syllabified by the core rules. Prefix and compound splits need the word
// list.
inline Parts parts(const std::string& low, const std::set<std::string>& words) {
    size_t n = low.size();
    size_t end = n;

    // rule 5: suffixes from the fixed list ("ed" only after d/t)
    std::string tail;
    for (const auto& suf : suffixes()) {
        if (n < suf.size() + 2 || low.compare(n - suf.size(), suf.size(), suf) != 0)
            continue;
        std::string rest = low.substr(0, n - suf.size());
        if (!has_vowel_letter(rest)) continue;
        if (suf == "ed" && rest.back() != 'd' && rest.back() != 't') continue;
        end = n - suf.size();
        tail = suf;
        break;
    }

    // rule 5: prefixes, only when the remainder is a known word
    size_t head_end = 0;
    if (!words.empty()) {
        for (const auto& pre : prefixes()) {
            if (end > pre.size() && low.compare(0, pre.size(), pre) == 0 &&
                words.count(low.substr(pre.size(), end - pre.size()))) {
                head_end = pre.size();
                break;
            }
        }
    }

    Parts out;
    if (head_end > 0) out.spans.push_back({0, head_end});

    // rule 4: compound split when both halves are dictionary words
    size_t mid_begin = head_end;
    bool compound = false;
    if (!words.empty()) {
        for (size_t cut = end - 1; cut > mid_begin + 1; --cut) {
            if (words.count(low.substr(mid_begin, cut - mid_begin)) &&
                words.count(low.substr(cut, end - cut))) {
                out.spans.push_back({mid_begin, cut});
                out.spans.push_back({cut, end});
                compound = true;
                break;
            }
        }
    }
    if (!compound) out.spans.push_back({mid_begin, end});
    if (!tail.empty()) {
        out.spans.push_back({end, n});
        out.last_atomic = true;
    }
    return out;
}

}  // namespace detail::en

/// English heuristic syllabifier. `words`, when provided, enables the
/// compound and prefix rules. Returns nullopt for words without a vowel or
/// with non-alphabetic characters (the caller applies the fallback policy).
inline std::optional<SyllabifiedWord> syllabify_english(
    std::string_view raw, const std::set<std::string>& words = {}) {
    std::string word = nfc(raw);
    if (word.empty()) throw std::invalid_argument("syllabify_english: empty word");
    for (char c : word) {
        unsigned char u = static_cast<unsigned char>(c);
        if (!((u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z'))) return std::nullopt;
    }
    std::string low = word;
    for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!detail::en::has_vowel_letter(low)) return std::nullopt;

    std::vector<size_t> cuts;
    detail::en::Parts parts = detail::en::parts(low, words);
    for (size_t pi = 0; pi < parts.spans.size(); ++pi) {
        auto [from, to] = parts.spans[pi];
        std::string part = low.substr(from, to - from);
        bool atomic = parts.last_atomic && pi + 1 == parts.spans.size();
        if (!atomic) {
            // rule 3: final consonant+le chunk
            size_t core_len = part.size();
            if (part.size() >= 4 && part.compare(part.size() - 2, 2, "le") == 0 &&
                !detail::en::is_vowel_letter(part[part.size() - 3])) {
                core_len = part.size() - 3;
            }
            for (size_t cut : detail::en::core_cuts(part.substr(0, core_len)))
                cuts.push_back(from + cut);
            if (core_len < part.size() && core_len > 0) cuts.push_back(from + core_len);
        }
        if (to < low.size()) cuts.push_back(to);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    SyllabifiedWord out;
    out.word = word;
    out.method = SegmentationMethod::english_rules;
    size_t prev = 0;
    for (size_t cut : cuts) {
        if (cut == 0 || cut >= word.size()) continue;
        out.syllables.push_back(word.substr(prev, cut - prev));
        prev = cut;
    }
    out.syllables.push_back(word.substr(prev));
    return out;
}

// ---------------------------------------------------------------------------
// Fallback policies
// ---------------------------------------------------------------------------

/// What to do with a word the syllabifier rejects: split to characters (the
/// paper's mono setting) or delegate to a BPE model (joint / o2m settings).
struct FallbackPolicy {
    enum class Mode { char_split, bpe_delegate };
    Mode mode = Mode::char_split;
    const BpeModel* bpe_model = nullptr;
};

inline SyllabifiedWord apply_fallback(std::string_view raw, const FallbackPolicy& policy) {
    std::string word = nfc(raw);
    if (word.empty()) throw std::invalid_argument("apply_fallback: empty word");
    SyllabifiedWord out;
    out.word = word;
    if (policy.mode == FallbackPolicy::Mode::char_split) {
        out.method = SegmentationMethod::fallback_chars;
        out.syllables = graphemes(word);
    } else {
        if (policy.bpe_model == nullptr)
            throw std::invalid_argument("apply_fallback: bpe_delegate needs a model");
        out.method = SegmentationMethod::fallback_bpe;
        out.syllables = bpe_encode(word, *policy.bpe_model);
    }
    return out;
}

}  // namespace syltok
