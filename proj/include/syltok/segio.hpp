#pragma once

// Corpus ingestion and the segmentation serialization formats, with exact
// round-trip detokenization:
//   boundary  "A @ syl la ble"   — `@` token between words
//   suffix    "A syl@ la@ ble"   — non-final pieces carry a `@` suffix
//   prefix    "▁A ▁syl la ble"   — first piece of each word carries U+2581
// Marker collisions are rejected up front instead of corrupting output.

#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "syltok/hyphenator.hpp"
#include "syltok/syllabifier.hpp"
#include "syltok/text.hpp"

namespace syltok {

/// One sentence as an ordered list of words, each word an ordered list of
/// pieces. Pieces of a word concatenate to the word with no separator.
struct SegmentedSentence {
    std::vector<std::vector<std::string>> words;

    bool operator==(const SegmentedSentence&) const = default;

    std::vector<std::string> reconstructed_words() const {
        std::vector<std::string> out;
        out.reserve(words.size());
        for (const auto& w : words) out.push_back(join(w, ""));
        return out;
    }
};

enum class SegFormat { plain, boundary, suffix, prefix };

inline constexpr std::string_view kBoundaryToken = "@";
inline constexpr std::string_view kSuffixMarker = "@";
inline constexpr std::string_view kPrefixMarker = "▁";  // ▁

inline std::optional<SegFormat> parse_format(std::string_view name) {
    if (name == "plain") return SegFormat::plain;
    if (name == "boundary") return SegFormat::boundary;
    if (name == "suffix") return SegFormat::suffix;
    if (name == "prefix") return SegFormat::prefix;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Encoders
// ---------------------------------------------------------------------------

inline std::string encode_boundary_format(const SegmentedSentence& s) {
    std::string out;
    for (size_t w = 0; w < s.words.size(); ++w) {
        if (w) { out += ' '; out += kBoundaryToken; out += ' '; }
        for (size_t i = 0; i < s.words[w].size(); ++i) {
            const std::string& piece = s.words[w][i];
            if (piece == kBoundaryToken)
                throw std::runtime_error(
                    "boundary format: piece collides with the '@' boundary token");
            if (i) out += ' ';
            out += piece;
        }
    }
    return out;
}

inline std::string encode_suffix_format(const SegmentedSentence& s) {
    std::string out;
    for (size_t w = 0; w < s.words.size(); ++w) {
        if (w) out += ' ';
        const auto& pieces = s.words[w];
        for (size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].size() >= kSuffixMarker.size() &&
                pieces[i].ends_with(kSuffixMarker))
                throw std::runtime_error(
                    "suffix format: piece '" + pieces[i] + "' ends with the marker");
            if (i) out += ' ';
            out += pieces[i];
            if (i + 1 < pieces.size()) out += kSuffixMarker;
        }
    }
    return out;
}

inline std::string encode_prefix_format(const SegmentedSentence& s) {
    std::string out;
    for (size_t w = 0; w < s.words.size(); ++w) {
        if (w) out += ' ';
        const auto& pieces = s.words[w];
        for (size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].starts_with(kPrefixMarker))
                throw std::runtime_error(
                    "prefix format: piece '" + pieces[i] + "' starts with the marker");
            if (i) out += ' ';
            if (i == 0) out += kPrefixMarker;
            out += pieces[i];
        }
    }
    return out;
}

/// Non-reversible debugging format: all pieces space-separated.
inline std::string encode_plain_format(const SegmentedSentence& s) {
    std::string out;
    bool first = true;
    for (const auto& w : s.words)
        for (const auto& piece : w) {
            if (!first) out += ' ';
            out += piece;
            first = false;
        }
    return out;
}

inline std::string encode_format(const SegmentedSentence& s, SegFormat f) {
    switch (f) {
        case SegFormat::plain: return encode_plain_format(s);
        case SegFormat::boundary: return encode_boundary_format(s);
        case SegFormat::suffix: return encode_suffix_format(s);
        case SegFormat::prefix: return encode_prefix_format(s);
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Decoder
// ---------------------------------------------------------------------------

/// Exact inverse of the reversible encoders. Malformed input (dangling
/// markers, empty words) is reported with the offending token position.
inline SegmentedSentence decode_format(std::string_view text, SegFormat f) {
    std::vector<std::string> toks = split_words(text);
    SegmentedSentence s;
    auto fail = [](size_t tok_index, const std::string& what) -> std::runtime_error {
        return std::runtime_error("malformed input at token " +
                                  std::to_string(tok_index + 1) + ": " + what);
    };

    switch (f) {
        case SegFormat::plain:
            throw std::invalid_argument("plain format is not decodable");

        case SegFormat::boundary: {
            std::vector<std::string> word;
            for (size_t i = 0; i < toks.size(); ++i) {
                if (toks[i] == kBoundaryToken) {
                    if (word.empty()) throw fail(i, "word boundary without a word");
                    s.words.push_back(std::move(word));
                    word.clear();
                } else {
                    word.push_back(std::move(toks[i]));
                }
            }
            if (!word.empty()) s.words.push_back(std::move(word));
            else if (!toks.empty()) throw fail(toks.size() - 1, "trailing word boundary");
            break;
        }

        case SegFormat::suffix: {
            std::vector<std::string> word;
            for (size_t i = 0; i < toks.size(); ++i) {
                if (toks[i].ends_with(kSuffixMarker)) {
                    std::string piece = toks[i].substr(0, toks[i].size() - kSuffixMarker.size());
                    if (piece.empty()) throw fail(i, "empty piece before suffix marker");
                    word.push_back(std::move(piece));
                } else {
                    word.push_back(std::move(toks[i]));
                    s.words.push_back(std::move(word));
                    word.clear();
                }
            }
            if (!word.empty())
                throw fail(toks.size() - 1, "sentence ends inside a word");
            break;
        }

        case SegFormat::prefix: {
            std::vector<std::string> word;
            for (size_t i = 0; i < toks.size(); ++i) {
                if (toks[i].starts_with(kPrefixMarker)) {
                    if (!word.empty()) {
                        s.words.push_back(std::move(word));
                        word.clear();
                    }
                    std::string piece = toks[i].substr(kPrefixMarker.size());
                    if (piece.empty()) throw fail(i, "empty piece after word-start marker");
                    word.push_back(std::move(piece));
                } else {
                    if (word.empty()) throw fail(i, "continuation piece before any word start");
                    word.push_back(std::move(toks[i]));
                }
            }
            if (!word.empty()) s.words.push_back(std::move(word));
            break;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Corpus reading
// ---------------------------------------------------------------------------

enum class CorpusKind { plain_text, conllu, parallel_pair, presegmented };

/// One corpus word; `pieces` is set when the source is pre-segmented.
struct CorpusWord {
    std::string text;
    std::optional<std::vector<std::string>> pieces;
};

struct CorpusSentence {
    std::vector<CorpusWord> words;
};

namespace detail {

inline bool getline_norm(std::istream& in, std::string& line, bool crlf_tolerant) {
    if (!std::getline(in, line)) return false;
    if (crlf_tolerant && !line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace detail

/// Single-consumer sentence iterator over a corpus source. plain_text yields
/// whitespace-tokenized sentences; conllu yields the surface words of each
/// tree (multiword-token ranges win over their covered syntactic words);
/// presegmented files declare a piece delimiter in a header line
/// (`#presegmented delimiter=<delim>`); parallel_pair drains two plain-text
/// streams in order (the joint-training convention).
class CorpusReader {
public:
    static CorpusReader plain(std::istream& in, bool crlf_tolerant = false) {
        return CorpusReader(CorpusKind::plain_text, &in, nullptr, crlf_tolerant);
    }
    static CorpusReader conllu(std::istream& in, bool crlf_tolerant = false) {
        return CorpusReader(CorpusKind::conllu, &in, nullptr, crlf_tolerant);
    }
    static CorpusReader parallel(std::istream& src, std::istream& tgt,
                                 bool crlf_tolerant = false) {
        return CorpusReader(CorpusKind::parallel_pair, &src, &tgt, crlf_tolerant);
    }
    static CorpusReader presegmented(std::istream& in, bool crlf_tolerant = false) {
        CorpusReader r(CorpusKind::presegmented, &in, nullptr, crlf_tolerant);
        std::string header;
        if (!detail::getline_norm(in, header, crlf_tolerant))
            throw std::runtime_error("presegmented corpus: missing header line");
        const std::string prefix = "#presegmented delimiter=";
        if (header.rfind(prefix, 0) != 0 || header.size() == prefix.size())
            throw std::runtime_error(
                "presegmented corpus: header must be '#presegmented delimiter=<delim>'");
        r.delimiter_ = header.substr(prefix.size());
        return r;
    }

    CorpusKind kind() const { return kind_; }

    std::optional<CorpusSentence> next() {
        switch (kind_) {
            case CorpusKind::plain_text:
                return next_plain(*primary_);
            case CorpusKind::parallel_pair: {
                if (auto s = next_plain(*primary_)) return s;
                return next_plain(*secondary_);
            }
            case CorpusKind::presegmented:
                return next_presegmented();
            case CorpusKind::conllu:
                return next_conllu();
        }
        return std::nullopt;
    }

    /// Drains the reader.
    std::vector<CorpusSentence> read_all() {
        std::vector<CorpusSentence> out;
        while (auto s = next()) out.push_back(std::move(*s));
        return out;
    }

private:
    CorpusReader(CorpusKind kind, std::istream* a, std::istream* b, bool crlf)
        : kind_(kind), primary_(a), secondary_(b), crlf_(crlf) {}

    std::optional<CorpusSentence> next_plain(std::istream& in) {
        std::string line;
        if (!detail::getline_norm(in, line, crlf_)) return std::nullopt;
        CorpusSentence s;
        for (auto& w : split_words(line)) s.words.push_back({std::move(w), std::nullopt});
        return s;
    }

    std::optional<CorpusSentence> next_presegmented() {
        std::string line;
        if (!detail::getline_norm(*primary_, line, crlf_)) return std::nullopt;
        CorpusSentence s;
        for (auto& tok : split_words(line)) {
            CorpusWord w;
            w.pieces = std::vector<std::string>{};
            size_t start = 0;
            while (true) {
                size_t pos = tok.find(delimiter_, start);
                if (pos == std::string::npos) {
                    w.pieces->push_back(tok.substr(start));
                    break;
                }
                w.pieces->push_back(tok.substr(start, pos - start));
                start = pos + delimiter_.size();
            }
            std::erase(*w.pieces, "");
            if (w.pieces->empty()) continue;
            w.text = join(*w.pieces, "");
            s.words.push_back(std::move(w));
        }
        return s;
    }

    std::optional<CorpusSentence> next_conllu() {
        CorpusSentence s;
        bool saw_token = false;
        std::string line;
        while (detail::getline_norm(*primary_, line, crlf_)) {
            ++lineno_;
            if (line.empty()) {
                if (saw_token) return s;
                continue;  // stray blank lines between sentences
            }
            if (line[0] == '#') continue;

            // split on tabs; CoNLL-U rows carry exactly 10 columns
            std::vector<std::string> cols;
            size_t start = 0;
            while (true) {
                size_t pos = line.find('\t', start);
                if (pos == std::string::npos) {
                    cols.push_back(line.substr(start));
                    break;
                }
                cols.push_back(line.substr(start, pos - start));
                start = pos + 1;
            }
            if (cols.size() != 10)
                throw std::runtime_error("conllu line " + std::to_string(lineno_) +
                                         ": expected 10 columns, got " +
                                         std::to_string(cols.size()));
            const std::string& id = cols[0];
            const std::string& form = cols[1];
            if (id.find('.') != std::string::npos) continue;  // empty node
            size_t dash = id.find('-');
            if (dash != std::string::npos) {
                // multiword token: surface form wins, covered words skipped
                long to = std::stol(id.substr(dash + 1));
                skip_until_ = to;
                s.words.push_back({form, std::nullopt});
                saw_token = true;
                continue;
            }
            long n = std::stol(id);
            if (n <= skip_until_) continue;
            skip_until_ = 0;
            s.words.push_back({form, std::nullopt});
            saw_token = true;
        }
        if (saw_token) return s;
        return std::nullopt;
    }

    CorpusKind kind_;
    std::istream* primary_;
    std::istream* secondary_;
    bool crlf_ = false;
    std::string delimiter_;
    size_t lineno_ = 0;
    long skip_until_ = 0;
};

/// Reads a whole CoNLL-U document.
inline std::vector<CorpusSentence> read_conllu(std::istream& in, bool crlf_tolerant = false) {
    return CorpusReader::conllu(in, crlf_tolerant).read_all();
}

inline std::vector<CorpusSentence> read_conllu(const std::string& text) {
    std::istringstream in(text);
    return read_conllu(in);
}

// ---------------------------------------------------------------------------
// Word segmenters and corpus segmentation
// ---------------------------------------------------------------------------

/// Bundles one segmentation method with the fallback policy applied when the
/// syllabifier rejects a word. Hyphenation, BPE and character splitting never
/// reject, so the policy only fires for the rule-based methods.
class WordSegmenter {
public:
    enum class Kind { profile, english, hyphenation, bpe, chars, as_is };

    static WordSegmenter with_profile(const LanguageProfile& p, FallbackPolicy fb = {}) {
        WordSegmenter s(Kind::profile, fb);
        s.profile_ = &p;
        return s;
    }
    static WordSegmenter english(FallbackPolicy fb = {},
                                 const std::set<std::string>* words = nullptr) {
        WordSegmenter s(Kind::english, fb);
        s.words_ = words;
        return s;
    }
    static WordSegmenter with_patterns(const PatternSet& ps) {
        WordSegmenter s(Kind::hyphenation, {});
        s.patterns_ = &ps;
        return s;
    }
    static WordSegmenter with_bpe(const BpeModel& m) {
        WordSegmenter s(Kind::bpe, {});
        s.bpe_ = &m;
        return s;
    }
    static WordSegmenter chars() { return WordSegmenter(Kind::chars, {}); }

    /// Passes pre-segmented pieces through; words without pieces fall back.
    static WordSegmenter as_is(FallbackPolicy fb = {}) {
        return WordSegmenter(Kind::as_is, fb);
    }

    Kind kind() const { return kind_; }

    std::vector<std::string> segment(const CorpusWord& word) const {
        if (word.pieces && (kind_ == Kind::as_is)) return *word.pieces;
        switch (kind_) {
            case Kind::profile: {
                auto r = syllabify(word.text, *profile_);
                return r ? r->syllables : apply_fallback(word.text, fallback_).syllables;
            }
            case Kind::english: {
                auto r = syllabify_english(word.text, words_ ? *words_ : no_words());
                return r ? r->syllables : apply_fallback(word.text, fallback_).syllables;
            }
            case Kind::hyphenation:
                return hyphenate(word.text, *patterns_).syllables;
            case Kind::bpe:
                return bpe_encode(word.text, *bpe_);
            case Kind::chars:
                return graphemes(nfc(word.text));
            case Kind::as_is:
                return apply_fallback(word.text, fallback_).syllables;
        }
        throw std::logic_error("unreachable");
    }

    std::vector<std::string> segment(const std::string& text) const {
        return segment(CorpusWord{text, std::nullopt});
    }

private:
    WordSegmenter(Kind k, FallbackPolicy fb) : kind_(k), fallback_(fb) {}
    static const std::set<std::string>& no_words() {
        static const std::set<std::string> empty;
        return empty;
    }

    Kind kind_;
    FallbackPolicy fallback_;
    const LanguageProfile* profile_ = nullptr;
    const PatternSet* patterns_ = nullptr;
    const BpeModel* bpe_ = nullptr;
    const std::set<std::string>* words_ = nullptr;
};

inline SegmentedSentence segment_sentence(const CorpusSentence& sent,
                                          const WordSegmenter& seg) {
    SegmentedSentence out;
    out.words.reserve(sent.words.size());
    for (const auto& w : sent.words) out.words.push_back(seg.segment(w));
    return out;
}

/// Segments a whole corpus, one output line per sentence, order-preserving.
/// With threads > 1 sentences are processed in parallel batches and written
/// back in order, so the output is identical to the serial run.
inline void segment_corpus(CorpusReader& reader, const WordSegmenter& seg,
                           SegFormat format, std::ostream& out, unsigned threads = 1) {
    if (threads <= 1) {
        while (auto sent = reader.next())
            out << encode_format(segment_sentence(*sent, seg), format) << '\n';
        return;
    }
    constexpr size_t kBatch = 256;
    std::vector<CorpusSentence> batch;
    batch.reserve(kBatch);
    for (;;) {
        batch.clear();
        while (batch.size() < kBatch) {
            auto sent = reader.next();
            if (!sent) break;
            batch.push_back(std::move(*sent));
        }
        if (batch.empty()) break;
        std::vector<std::string> lines(batch.size());
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        size_t per = (batch.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            size_t lo = t * per, hi = std::min(batch.size(), lo + per);
            if (lo >= hi) break;
            pool.emplace_back([&, t, lo, hi] {
                try {
                    for (size_t i = lo; i < hi; ++i)
                        lines[i] = encode_format(segment_sentence(batch[i], seg), format);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        for (const auto& l : lines) out << l << '\n';
        if (batch.size() < kBatch) break;
    }
}

}  // namespace syltok
