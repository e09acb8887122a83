#pragma once

// Evaluation math: character-level perplexity normalization, chrF, paired
// approximate-randomization significance testing, and the type/token corpus
// statistics. All computations are pure; corpus aggregation uses integer
// sufficient statistics so results do not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syltok/segio.hpp"
#include "syltok/text.hpp"

namespace syltok {

// ---------------------------------------------------------------------------
// Character-level perplexity
// ---------------------------------------------------------------------------

/// One LM log record: mean negative log-likelihood in nats per segmentation
/// token, the token count in the model's segmentation, and the count in
/// characters. The +1 length terms account for the end-of-sequence event.
struct PplRecord {
    double cross_entropy = 0.0;
    uint64_t seg_len = 0;
    uint64_t char_len = 0;
};

/// ppl^c = exp(L * (seg_len + 1) / (char_len + 1)). Renormalizes perplexity
/// by sequence length in characters so models over different segmentation
/// granularities are comparable.
inline double char_ppl(const PplRecord& r) {
    return std::exp(r.cross_entropy * (static_cast<double>(r.seg_len) + 1.0) /
                    (static_cast<double>(r.char_len) + 1.0));
}

/// Character-perplexity gap between two segmentations of the same corpus.
inline double ppl_gap(double char_ppl_value, double syl_ppl_value) {
    return char_ppl_value - syl_ppl_value;
}

// ---------------------------------------------------------------------------
// chrF
// ---------------------------------------------------------------------------

struct ChrfConfig {
    size_t max_order = 6;
    double beta = 2.0;
    bool include_whitespace = false;
};

/// Clipped n-gram sufficient statistics per order; summable across segments
/// for corpus-level (micro-averaged) scoring.
struct ChrfStats {
    std::vector<uint64_t> matched;    // clipped matches per order
    std::vector<uint64_t> hyp_total;  // hypothesis n-grams per order
    std::vector<uint64_t> ref_total;  // reference n-grams per order

    explicit ChrfStats(size_t orders = 0)
        : matched(orders, 0), hyp_total(orders, 0), ref_total(orders, 0) {}

    ChrfStats& operator+=(const ChrfStats& o) {
        for (size_t i = 0; i < matched.size(); ++i) {
            matched[i] += o.matched[i];
            hyp_total[i] += o.hyp_total[i];
            ref_total[i] += o.ref_total[i];
        }
        return *this;
    }
};

namespace detail {

inline std::vector<std::string> chrf_units(std::string_view text, bool include_ws) {
    std::vector<std::string> gs = graphemes(nfc(text));
    if (include_ws) return gs;
    std::vector<std::string> out;
    out.reserve(gs.size());
    for (auto& g : gs) {
        std::vector<char32_t> cps = decode_utf8(g);
        if (!cps.empty() && is_space(cps[0])) continue;
        out.push_back(std::move(g));
    }
    return out;
}

inline std::map<std::string, uint64_t> ngram_counts(const std::vector<std::string>& units,
                                                    size_t n) {
    std::map<std::string, uint64_t> counts;
    if (units.size() < n) return counts;
    for (size_t i = 0; i + n <= units.size(); ++i) {
        std::string key;
        for (size_t k = 0; k < n; ++k) {
            key += units[i + k];
            key += '\x1f';  // unit separator, avoids ambiguous concatenation
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace detail

inline ChrfStats chrf_stats(std::string_view hypothesis, std::string_view reference,
                            const ChrfConfig& cfg) {
    if (cfg.max_order < 1) throw std::invalid_argument("chrf: max_order must be >= 1");
    if (cfg.beta <= 0) throw std::invalid_argument("chrf: beta must be positive");
    std::vector<std::string> hyp = detail::chrf_units(hypothesis, cfg.include_whitespace);
    std::vector<std::string> ref = detail::chrf_units(reference, cfg.include_whitespace);

    ChrfStats stats(cfg.max_order);
    for (size_t n = 1; n <= cfg.max_order; ++n) {
        auto hc = detail::ngram_counts(hyp, n);
        auto rc = detail::ngram_counts(ref, n);
        uint64_t matched = 0;
        for (const auto& [g, c] : hc) {
            auto it = rc.find(g);
            if (it != rc.end()) matched += std::min(c, it->second);
        }
        stats.matched[n - 1] = matched;
        stats.hyp_total[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
        stats.ref_total[n - 1] = ref.size() >= n ? ref.size() - n + 1 : 0;
    }
    return stats;
}

/// F-score on the 0-100 scale from pooled statistics. Orders with no n-grams
/// on either side are excluded from the averages; orders with n-grams but no
/// matches contribute zero. Returns 0 when the F denominator is 0.
inline double chrf_score(const ChrfStats& stats, const ChrfConfig& cfg) {
    double psum = 0.0, rsum = 0.0;
    size_t included = 0;
    for (size_t i = 0; i < stats.matched.size(); ++i) {
        if (stats.hyp_total[i] == 0 && stats.ref_total[i] == 0) continue;
        ++included;
        if (stats.hyp_total[i] > 0)
            psum += static_cast<double>(stats.matched[i]) / static_cast<double>(stats.hyp_total[i]);
        if (stats.ref_total[i] > 0)
            rsum += static_cast<double>(stats.matched[i]) / static_cast<double>(stats.ref_total[i]);
    }
    if (included == 0) return 0.0;
    double p = psum / static_cast<double>(included);
    double r = rsum / static_cast<double>(included);
    double b2 = cfg.beta * cfg.beta;
    double denom = b2 * p + r;
    if (denom == 0.0) return 0.0;
    return 100.0 * (1.0 + b2) * p * r / denom;
}

inline double chrf(std::string_view hypothesis, std::string_view reference,
                   const ChrfConfig& cfg = {}) {
    return chrf_score(chrf_stats(hypothesis, reference, cfg), cfg);
}

/// Corpus-level chrF: statistics summed over all segment pairs, then scored.
inline double corpus_chrf(const std::vector<std::string>& hyp_lines,
                          const std::vector<std::string>& ref_lines,
                          const ChrfConfig& cfg = {}) {
    if (hyp_lines.size() != ref_lines.size())
        throw std::invalid_argument("corpus_chrf: hypothesis and reference line "
                                    "counts differ (" +
                                    std::to_string(hyp_lines.size()) + " vs " +
                                    std::to_string(ref_lines.size()) + ")");
    ChrfStats pooled(cfg.max_order);
    for (size_t i = 0; i < hyp_lines.size(); ++i)
        pooled += chrf_stats(hyp_lines[i], ref_lines[i], cfg);
    return chrf_score(pooled, cfg);
}

// ---------------------------------------------------------------------------
// Paired significance
// ---------------------------------------------------------------------------

namespace detail {

/// Add-one smoothed p: share of samples at least as extreme as the observed
/// statistic.
inline double p_from_samples(const std::vector<double>& abs_samples, double observed_abs) {
    size_t at_least = 0;
    for (double s : abs_samples)
        if (s >= observed_abs - 1e-12) ++at_least;
    return (static_cast<double>(at_least) + 1.0) /
           (static_cast<double>(abs_samples.size()) + 1.0);
}

}  // namespace detail

/// Paired approximate randomization over per-segment scores: the corpus
/// statistic is the mean score difference; each iteration flips a fair coin
/// per segment to swap the paired scores and recomputes |delta|. p is the
/// add-one smoothed share of permuted |delta| >= observed |delta|.
/// Deterministic under a fixed seed.
inline double paired_significance(const std::vector<double>& scores_a,
                                  const std::vector<double>& scores_b,
                                  uint64_t iterations, uint64_t seed) {
    if (scores_a.size() != scores_b.size())
        throw std::invalid_argument("paired_significance: score vectors differ in length");
    if (scores_a.empty())
        throw std::invalid_argument("paired_significance: empty score vectors");
    if (iterations < 1000)
        throw std::invalid_argument("paired_significance: need >= 1000 iterations");

    const size_t n = scores_a.size();
    double observed = 0.0;
    std::vector<double> diff(n);
    for (size_t i = 0; i < n; ++i) {
        diff[i] = scores_a[i] - scores_b[i];
        observed += diff[i];
    }
    observed = std::abs(observed / static_cast<double>(n));

    std::mt19937_64 rng(seed);
    std::vector<double> samples;
    samples.reserve(iterations);
    for (uint64_t it = 0; it < iterations; ++it) {
        double sum = 0.0;
        for (size_t i = 0; i < n; ++i) {
            // low bit of one draw per segment: a fair, seed-stable coin
            bool swap = (rng() & 1ull) != 0;
            sum += swap ? -diff[i] : diff[i];
        }
        samples.push_back(std::abs(sum / static_cast<double>(n)));
    }
    return detail::p_from_samples(samples, observed);
}

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

/// Token (n) and type (v) counts at word, syllable and character granularity.
/// Characters are grapheme clusters and exclude inter-word whitespace.
struct CorpusStats {
    uint64_t n_word = 0, v_word = 0;
    uint64_t n_syl = 0, v_syl = 0;
    uint64_t n_char = 0, v_char = 0;
};

inline CorpusStats corpus_stats(CorpusReader& reader, const WordSegmenter& seg) {
    CorpusStats st;
    std::set<std::string> word_types, syl_types, char_types;
    while (auto sent = reader.next()) {
        for (const auto& w : sent->words) {
            std::string norm = nfc(w.text);
            ++st.n_word;
            word_types.insert(norm);
            for (const auto& piece : seg.segment(w)) {
                ++st.n_syl;
                syl_types.insert(piece);
            }
            for (auto& g : graphemes(norm)) {
                ++st.n_char;
                char_types.insert(std::move(g));
            }
        }
    }
    st.v_word = word_types.size();
    st.v_syl = syl_types.size();
    st.v_char = char_types.size();
    return st;
}

/// (V_syl/N_syl, V_word/N_word): the vocabulary growth rates plotted against
/// each other in the type/token analysis.
inline std::pair<double, double> growth_rates(const CorpusStats& st) {
    if (st.n_syl == 0 || st.n_word == 0)
        throw std::invalid_argument("growth_rates: empty corpus");
    return {static_cast<double>(st.v_syl) / static_cast<double>(st.n_syl),
            static_cast<double>(st.v_word) / static_cast<double>(st.n_word)};
}

// ---------------------------------------------------------------------------
// Likelihood log ingestion
// ---------------------------------------------------------------------------

/// Parses one likelihood-log record: tab-separated cross_entropy, seg_len,
/// char_len.
inline PplRecord parse_ppl_record(std::string_view line, size_t lineno = 0) {
    std::vector<std::string> cols;
    size_t start = 0;
    std::string text(line);
    while (true) {
        size_t pos = text.find('\t', start);
        if (pos == std::string::npos) {
            cols.push_back(text.substr(start));
            break;
        }
        cols.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("likelihood log line " + std::to_string(lineno) +
                                  ": " + what);
    };
    if (cols.size() != 3) throw fail("expected 3 tab-separated fields");
    PplRecord r;
    try {
        size_t used = 0;
        r.cross_entropy = std::stod(cols[0], &used);
        if (used != cols[0].size()) throw fail("bad cross_entropy");
        r.seg_len = std::stoull(cols[1], &used);
        if (used != cols[1].size()) throw fail("bad seg_len");
        r.char_len = std::stoull(cols[2], &used);
        if (used != cols[2].size()) throw fail("bad char_len");
    } catch (const std::invalid_argument&) {
        throw fail("non-numeric field");
    } catch (const std::out_of_range&) {
        throw fail("field out of range");
    }
    if (r.cross_entropy < 0) throw fail("cross_entropy must be >= 0");
    return r;
}

}  // namespace syltok
