#pragma once

// Deterministic byte-pair-encoding trainer and encoder. Merges are learned
// greedily over a word-frequency map (word-internal only, with a reserved
// end-of-word symbol) and ties break lexicographically so two runs over the
// same corpus produce byte-identical merge lists regardless of map iteration
// order.

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syltok/text.hpp"

namespace syltok {

class BpeModel {
public:
    using Merge = std::pair<std::string, std::string>;

    std::vector<Merge> merges;
    std::set<std::string> vocabulary;  // alphabet plus merge results
    std::string end_of_word_marker = "</w>";
    size_t alphabet_size = 0;

    /// Train-time accounting: |vocabulary| must equal alphabet + merges
    /// (the reserved marker is tracked separately).
    bool accounting_holds() const {
        return vocabulary.size() == alphabet_size + merges.size();
    }
};

namespace detail {

// One corpus word as its current symbol sequence plus frequency.
struct BpeWord {
    std::vector<std::string> symbols;
    uint64_t freq = 0;
};

inline void count_pairs(const std::vector<BpeWord>& words,
                        std::map<BpeModel::Merge, uint64_t>& counts) {
    counts.clear();
    for (const auto& w : words) {
        for (size_t i = 0; i + 1 < w.symbols.size(); ++i)
            counts[{w.symbols[i], w.symbols[i + 1]}] += w.freq;
    }
}

/// Applies one merge to a symbol sequence, leftmost occurrence first.
inline void apply_merge(std::vector<std::string>& symbols, const BpeModel::Merge& m) {
    size_t w = 0;
    for (size_t r = 0; r < symbols.size();) {
        if (r + 1 < symbols.size() && symbols[r] == m.first && symbols[r + 1] == m.second) {
            symbols[w++] = m.first + m.second;
            r += 2;
        } else {
            symbols[w++] = std::move(symbols[r]);
            ++r;
        }
    }
    symbols.resize(w);
}

}  // namespace detail

/// Trains a BPE model: repeatedly merge the most frequent adjacent symbol
/// pair (ties: lexicographic on (left, right)) until the vocabulary —
/// alphabet plus merge results — reaches target_vocab or no pair reaches
/// min_pair_count. Words never merge across their boundary; a reserved
/// end-of-word symbol is appended to each word first.
inline BpeModel bpe_train(const std::map<std::string, uint64_t>& word_freq,
                          size_t target_vocab, uint64_t min_pair_count = 1) {
    if (word_freq.empty()) throw std::invalid_argument("bpe_train: empty corpus");

    BpeModel model;
    std::vector<detail::BpeWord> words;
    words.reserve(word_freq.size());
    for (const auto& [w, f] : word_freq) {
        detail::BpeWord bw;
        bw.symbols = graphemes(nfc(w));
        if (bw.symbols.empty()) continue;
        for (const auto& g : bw.symbols) model.vocabulary.insert(g);
        bw.symbols.push_back(model.end_of_word_marker);
        bw.freq = f;
        words.push_back(std::move(bw));
    }
    model.alphabet_size = model.vocabulary.size();
    if (target_vocab < model.alphabet_size)
        throw std::invalid_argument("bpe_train: target_vocab " +
                                    std::to_string(target_vocab) +
                                    " is below alphabet size " +
                                    std::to_string(model.alphabet_size));

    // Tie order: lexicographic on (left, right), except that the reserved
    // marker ranks after every real piece, so ties go to merges of actual
    // text rather than end-of-word merges.
    auto piece_less = [&](const std::string& a, const std::string& b) {
        bool am = a == model.end_of_word_marker, bm = b == model.end_of_word_marker;
        if (am != bm) return bm;
        return a < b;
    };
    auto pair_less = [&](const BpeModel::Merge& a, const BpeModel::Merge& b) {
        if (a.first != b.first) return piece_less(a.first, b.first);
        return piece_less(a.second, b.second);
    };

    std::map<BpeModel::Merge, uint64_t> counts;
    while (model.alphabet_size + model.merges.size() < target_vocab) {
        detail::count_pairs(words, counts);
        const BpeModel::Merge* best = nullptr;
        uint64_t best_count = 0;
        for (const auto& [pair, c] : counts) {
            if (c > best_count || (c == best_count && best && pair_less(pair, *best))) {
                best = &pair;
                best_count = c;
            }
        }
        if (best == nullptr || best_count < min_pair_count) break;
        for (auto& w : words) detail::apply_merge(w.symbols, *best);
        model.vocabulary.insert(best->first + best->second);
        model.merges.push_back(*best);
    }
    return model;
}

/// Syllabary-sized vocabulary: same training with target_vocab fixed to the
/// number of distinct syllables.
inline BpeModel bpe_train_to_syllabary_size(const std::map<std::string, uint64_t>& word_freq,
                                            const std::set<std::string>& syllabary,
                                            uint64_t min_pair_count = 1) {
    return bpe_train(word_freq, syllabary.size(), min_pair_count);
}

/// Encodes one word by replaying the merge list in training order (leftmost
/// occurrence first within each merge). Unseen graphemes pass through as
/// singleton pieces; the end-of-word marker is stripped from the output, so
/// pieces concatenate back to the word.
inline std::vector<std::string> bpe_encode(std::string_view word, const BpeModel& model) {
    std::string norm = nfc(word);
    std::vector<std::string> symbols = graphemes(norm);
    if (symbols.empty()) throw std::invalid_argument("bpe_encode: empty word");
    symbols.push_back(model.end_of_word_marker);
    for (const auto& m : model.merges) detail::apply_merge(symbols, m);

    // strip the marker (it can only be a suffix of the final piece)
    std::string& last = symbols.back();
    if (last == model.end_of_word_marker) {
        symbols.pop_back();
    } else if (last.size() > model.end_of_word_marker.size() &&
               last.compare(last.size() - model.end_of_word_marker.size(),
                            model.end_of_word_marker.size(),
                            model.end_of_word_marker) == 0) {
        last.resize(last.size() - model.end_of_word_marker.size());
    }
    return symbols;
}

/// Inverse of bpe_encode: concatenation (tolerating a trailing marker from
/// raw model output).
inline std::string bpe_decode(const std::vector<std::string>& pieces,
                              const std::string& marker = "</w>") {
    std::string out;
    for (const auto& p : pieces) out += p;
    if (out.size() >= marker.size() &&
        out.compare(out.size() - marker.size(), marker.size(), marker) == 0)
        out.resize(out.size() - marker.size());
    return out;
}

// ---------------------------------------------------------------------------
// Model serialization
// ---------------------------------------------------------------------------
//
// Line 1: "syltok-bpe v1 marker=<sym> normalization=nfc case=preserved"
// Then one merge per line, two space-separated pieces in training order.

inline void bpe_save(const BpeModel& model, std::ostream& out) {
    out << "syltok-bpe v1 marker=" << model.end_of_word_marker
        << " normalization=nfc case=preserved\n";
    for (const auto& [a, b] : model.merges) out << a << ' ' << b << '\n';
}

inline std::string bpe_save(const BpeModel& model) {
    std::ostringstream out;
    bpe_save(model, out);
    return out.str();
}

inline BpeModel bpe_load(std::istream& in) {
    BpeModel model;
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("bpe model: empty file");
    std::vector<std::string> toks = split_words(header);
    if (toks.size() < 3 || toks[0] != "syltok-bpe" || toks[1] != "v1" ||
        toks[2].rfind("marker=", 0) != 0)
        throw std::runtime_error("bpe model: bad header '" + header + "'");
    model.end_of_word_marker = toks[2].substr(7);

    std::string line;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> pieces = split_words(line);
        if (pieces.size() != 2)
            throw std::runtime_error("bpe model line " + std::to_string(lineno) +
                                     ": expected two pieces");
        model.merges.push_back({pieces[0], pieces[1]});
    }
    return model;
}

inline BpeModel bpe_load_string(const std::string& text) {
    std::istringstream in(text);
    return bpe_load(in);
}

}  // namespace syltok
