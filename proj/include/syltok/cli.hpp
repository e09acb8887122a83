#pragma once

// Command-line surface. Every subcommand reads stdin or --input and writes
// stdout or --output, so pipelines compose without temp files. Exit codes:
// 0 success, 1 validation error, 2 I/O error. Identical invocations produce
// byte-identical output; randomized commands take an explicit --seed with a
// fixed default.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "syltok/bpe.hpp"
#include "syltok/hyphenator.hpp"
#include "syltok/metrics.hpp"
#include "syltok/segio.hpp"
#include "syltok/syllabifier.hpp"
#include "syltok/text.hpp"

namespace syltok::cli {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

class InputFile {
public:
    // path empty or "-" means the process input stream
    InputFile(const std::string& path, std::istream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path);
        if (!*file_) throw IoError("cannot open input file '" + path + "'");
        stream_ = file_.get();
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

class OutputFile {
public:
    OutputFile(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw IoError("cannot open output file '" + path + "'");
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

inline std::vector<std::string> read_lines(std::istream& in, bool crlf) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (crlf && !line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

inline SegFormat format_or_throw(const std::string& name) {
    auto f = parse_format(name);
    if (!f) throw ValidationError("unknown format '" + name + "'");
    return *f;
}

/// Profile lookup: explicit --profile path, then $SYLTOK_PROFILE_DIR, then
/// ./profiles relative to the working directory.
inline LanguageProfile resolve_profile(const std::string& lang,
                                       const std::string& explicit_path) {
    std::vector<std::string> tried;
    auto try_load = [&](const std::string& path) -> std::optional<LanguageProfile> {
        std::ifstream f(path);
        if (!f) {
            tried.push_back(path);
            return std::nullopt;
        }
        return load_profile(f, lang);
    };
    if (!explicit_path.empty()) {
        auto p = try_load(explicit_path);
        if (!p) throw IoError("cannot open profile '" + explicit_path + "'");
        return *p;
    }
    if (lang.empty()) throw ValidationError("--lang or --profile is required");
    if (const char* dir = std::getenv("SYLTOK_PROFILE_DIR")) {
        if (auto p = try_load(std::string(dir) + "/" + lang + ".profile")) return *p;
    }
    if (auto p = try_load("profiles/" + lang + ".profile")) return *p;
    std::string msg = "no profile for language '" + lang + "' (tried";
    for (const auto& t : tried) msg += " " + t;
    msg += "); set SYLTOK_PROFILE_DIR or pass --profile";
    throw ValidationError(msg);
}

// Options shared by the commands that segment words.
struct SegmenterOptions {
    std::string method;  // profile|english|hyphenation|bpe|char|as-is
    std::string lang;
    std::string profile_path;
    std::string patterns_path;
    std::string exceptions_path;
    size_t min_left = 2;
    size_t min_right = 2;
    std::string bpe_model_path;
    std::string fallback = "char";
    std::string fallback_model_path;
    std::string words_path;
};

// Owns the resources a WordSegmenter points into.
struct SegmenterBundle {
    std::optional<LanguageProfile> profile;
    std::optional<PatternSet> patterns;
    std::optional<BpeModel> bpe;
    std::optional<BpeModel> fallback_bpe;
    std::optional<std::set<std::string>> words;
    std::optional<WordSegmenter> segmenter;

    const WordSegmenter& get() const { return *segmenter; }
};

inline BpeModel load_bpe_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open BPE model '" + path + "'");
    return bpe_load(f);
}

inline SegmenterBundle build_segmenter(const SegmenterOptions& opt) {
    SegmenterBundle b;

    FallbackPolicy fb;
    if (opt.fallback == "char") {
        fb.mode = FallbackPolicy::Mode::char_split;
    } else if (opt.fallback == "bpe") {
        if (opt.fallback_model_path.empty())
            throw ValidationError("--fallback bpe requires --fallback-bpe-model");
        fb.mode = FallbackPolicy::Mode::bpe_delegate;
        b.fallback_bpe = load_bpe_file(opt.fallback_model_path);
        fb.bpe_model = &*b.fallback_bpe;
    } else {
        throw ValidationError("unknown fallback '" + opt.fallback + "'");
    }

    std::string method = opt.method;
    if (method.empty() || method == "syl")
        method = (opt.lang == "en") ? "english" : "profile";

    if (method == "profile") {
        b.profile = resolve_profile(opt.lang, opt.profile_path);
        b.segmenter = WordSegmenter::with_profile(*b.profile, fb);
    } else if (method == "english") {
        if (!opt.words_path.empty()) {
            std::ifstream f(opt.words_path);
            if (!f) throw IoError("cannot open word list '" + opt.words_path + "'");
            b.words = std::set<std::string>();
            std::string w;
            while (f >> w) b.words->insert(to_lower(nfc(w)));
        }
        b.segmenter = WordSegmenter::english(fb, b.words ? &*b.words : nullptr);
    } else if (method == "hyphenation") {
        if (opt.patterns_path.empty())
            throw ValidationError("hyphenation requires --patterns");
        std::ifstream f(opt.patterns_path);
        if (!f) throw IoError("cannot open pattern file '" + opt.patterns_path + "'");
        b.patterns = parse_patterns(f, opt.lang);
        if (!opt.exceptions_path.empty()) {
            std::ifstream fe(opt.exceptions_path);
            if (!fe) throw IoError("cannot open exception file '" + opt.exceptions_path + "'");
            PatternSet extra = parse_patterns(fe, opt.lang);
            for (auto& [w, brks] : extra.exceptions) b.patterns->exceptions[w] = brks;
        }
        if (opt.min_left < 1 || opt.min_right < 1)
            throw ValidationError("--min-left and --min-right must be >= 1");
        b.patterns->min_left = opt.min_left;
        b.patterns->min_right = opt.min_right;
        b.segmenter = WordSegmenter::with_patterns(*b.patterns);
    } else if (method == "bpe") {
        if (opt.bpe_model_path.empty()) throw ValidationError("bpe requires --bpe-model");
        b.bpe = load_bpe_file(opt.bpe_model_path);
        b.segmenter = WordSegmenter::with_bpe(*b.bpe);
    } else if (method == "char") {
        b.segmenter = WordSegmenter::chars();
    } else if (method == "as-is") {
        b.segmenter = WordSegmenter::as_is(fb);
    } else {
        throw ValidationError("unknown method '" + method + "'");
    }
    return b;
}

struct ReaderBundle {
    std::optional<InputFile> primary;
    std::optional<InputFile> secondary;
    std::optional<CorpusReader> reader;
};

inline ReaderBundle build_reader(const std::string& input_format,
                                 const std::string& input_path,
                                 const std::string& input2_path, std::istream& stdin_like,
                                 bool crlf) {
    ReaderBundle rb;
    rb.primary.emplace(input_path, stdin_like);
    if (input_format == "plain") {
        rb.reader = CorpusReader::plain(rb.primary->get(), crlf);
    } else if (input_format == "conllu") {
        rb.reader = CorpusReader::conllu(rb.primary->get(), crlf);
    } else if (input_format == "presegmented") {
        rb.reader = CorpusReader::presegmented(rb.primary->get(), crlf);
    } else if (input_format == "parallel") {
        if (input2_path.empty())
            throw ValidationError("parallel input needs --input2");
        rb.secondary.emplace(input2_path, stdin_like);
        rb.reader = CorpusReader::parallel(rb.primary->get(), rb.secondary->get(), crlf);
    } else {
        throw ValidationError("unknown input format '" + input_format + "'");
    }
    return rb;
}

inline void add_segmenter_flags(CLI::App* cmd, SegmenterOptions& opt, bool with_method) {
    if (with_method)
        cmd->add_option("--method", opt.method,
                        "profile|english|hyphenation|bpe|char|as-is");
    cmd->add_option("--lang", opt.lang, "language id (en uses the built-in rules)");
    cmd->add_option("--profile", opt.profile_path, "explicit profile file");
    cmd->add_option("--patterns", opt.patterns_path, "hyphenation pattern file");
    cmd->add_option("--exceptions", opt.exceptions_path, "hyphenation exception file");
    cmd->add_option("--min-left", opt.min_left, "unbreakable leading characters");
    cmd->add_option("--min-right", opt.min_right, "unbreakable trailing characters");
    cmd->add_option("--bpe-model", opt.bpe_model_path, "BPE model file");
    cmd->add_option("--fallback", opt.fallback, "char|bpe (for unsyllabifiable words)");
    cmd->add_option("--fallback-bpe-model", opt.fallback_model_path,
                    "model for --fallback bpe");
    cmd->add_option("--words", opt.words_path, "word list for the English compound rule");
}

}  // namespace detail

/// Runs one CLI invocation against explicit streams. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
               std::ostream& err) {
    using detail::InputFile;
    using detail::OutputFile;

    CLI::App app{"syllable-aware segmentation toolkit"};
    app.name("syltok");
    bool crlf = false;
    unsigned threads = 1;
    app.add_flag("--crlf-tolerant", crlf, "strip carriage returns on input");
    app.add_option("--threads", threads, "worker threads (does not change output)")
        ->check(CLI::Range(1u, 256u));
    app.require_subcommand(1);

    std::string input_path, input2_path, output_path;
    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--input", input_path, "input file (default stdin)");
        cmd->add_option("--output", output_path, "output file (default stdout)");
    };

    detail::SegmenterOptions seg_opt;
    std::string format_name = "plain";
    std::string input_format = "plain";

    // --- segmentation commands -------------------------------------------
    CLI::App* c_syllabify = app.add_subcommand(
        "syllabify", "syllabify words with a language profile or English rules");
    add_io(c_syllabify);
    detail::add_segmenter_flags(c_syllabify, seg_opt, false);
    c_syllabify->add_option("--format", format_name, "plain|boundary|suffix|prefix");

    CLI::App* c_hyphenate =
        app.add_subcommand("hyphenate", "hyphenate words with Liang patterns");
    add_io(c_hyphenate);
    detail::add_segmenter_flags(c_hyphenate, seg_opt, false);
    c_hyphenate->add_option("--format", format_name, "plain|boundary|suffix|prefix");

    CLI::App* c_segment =
        app.add_subcommand("segment", "segment a corpus with any method");
    add_io(c_segment);
    c_segment->add_option("--input2", input2_path, "second file for parallel input");
    detail::add_segmenter_flags(c_segment, seg_opt, true);
    c_segment->add_option("--format", format_name, "plain|boundary|suffix|prefix");
    c_segment->add_option("--input-format", input_format,
                          "plain|conllu|presegmented|parallel");

    CLI::App* c_bpe_encode =
        app.add_subcommand("bpe-encode", "encode words with a trained BPE model");
    add_io(c_bpe_encode);
    std::string bpe_model_path;
    c_bpe_encode->add_option("--model", bpe_model_path, "BPE model file")->required();
    c_bpe_encode->add_option("--format", format_name, "plain|boundary|suffix|prefix");

    // --- bpe-train ---------------------------------------------------------
    CLI::App* c_bpe_train = app.add_subcommand("bpe-train", "train a BPE model");
    std::vector<std::string> train_inputs;
    size_t vocab = 0;
    std::string syllabary_path;
    uint64_t min_pair_count = 1;
    c_bpe_train->add_option("--input", train_inputs,
                            "corpus file(s); several files train jointly");
    c_bpe_train->add_option("--output", output_path, "model file (default stdout)");
    c_bpe_train->add_option("--vocab", vocab, "target vocabulary size");
    c_bpe_train->add_option("--syllabary", syllabary_path,
                            "file of syllables; target = distinct count");
    c_bpe_train->add_option("--min-pair-count", min_pair_count,
                            "stop when no pair reaches this count");
    c_bpe_train->add_option("--input-format", input_format, "plain|conllu");

    // --- stats --------------------------------------------------------------
    CLI::App* c_stats =
        app.add_subcommand("stats", "type/token statistics and growth rates as CSV");
    std::vector<std::string> stats_inputs;
    c_stats->add_option("--input", stats_inputs, "corpus file(s), one CSV row each");
    c_stats->add_option("--output", output_path, "output file (default stdout)");
    detail::add_segmenter_flags(c_stats, seg_opt, true);
    c_stats->add_option("--input-format", input_format, "plain|conllu|presegmented");

    // --- ppl-convert ---------------------------------------------------------
    CLI::App* c_ppl = app.add_subcommand(
        "ppl-convert", "character-level perplexity from a likelihood log");
    add_io(c_ppl);

    // --- chrf ---------------------------------------------------------------
    CLI::App* c_chrf = app.add_subcommand("chrf", "corpus chrF score");
    std::string hyp_path, ref_path;
    ChrfConfig chrf_cfg;
    bool json_out = false;
    c_chrf->add_option("--hyp", hyp_path, "hypothesis file ('-' for stdin)")->required();
    c_chrf->add_option("--ref", ref_path, "reference file ('-' for stdin)")->required();
    c_chrf->add_option("--output", output_path, "output file (default stdout)");
    c_chrf->add_option("--max-order", chrf_cfg.max_order, "n-gram order cap");
    c_chrf->add_option("--beta", chrf_cfg.beta, "recall weight");
    c_chrf->add_flag("--include-whitespace", chrf_cfg.include_whitespace,
                     "keep whitespace in the character stream");
    c_chrf->add_flag("--json", json_out, "append a machine-readable JSON block");

    // --- sigtest --------------------------------------------------------------
    CLI::App* c_sig = app.add_subcommand(
        "sigtest", "paired approximate-randomization significance test");
    std::string a_path, b_path;
    uint64_t iterations = 10000, seed = 42;
    c_sig->add_option("--a", a_path, "per-segment scores, system A")->required();
    c_sig->add_option("--b", b_path, "per-segment scores, system B")->required();
    c_sig->add_option("--output", output_path, "output file (default stdout)");
    c_sig->add_option("--iterations", iterations, "randomization iterations (>= 1000)");
    c_sig->add_option("--seed", seed, "RNG seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*c_syllabify || *c_hyphenate || *c_segment || *c_bpe_encode) {
            if (*c_syllabify) {
                seg_opt.method = (seg_opt.lang == "en" && seg_opt.profile_path.empty())
                                     ? "english"
                                     : "profile";
            } else if (*c_hyphenate) {
                seg_opt.method = "hyphenation";
            } else if (*c_bpe_encode) {
                seg_opt.method = "bpe";
                seg_opt.bpe_model_path = bpe_model_path;
            } else if (seg_opt.method.empty()) {
                seg_opt.method = (input_format == "presegmented") ? "as-is" : "";
                if (seg_opt.method.empty() && !seg_opt.lang.empty())
                    seg_opt.method = "syl";
                if (seg_opt.method.empty())
                    throw ValidationError("segment requires --method (or --lang)");
            }
            if (!*c_segment && input_format != "plain")
                throw ValidationError("--input-format is only for segment");
            detail::SegmenterBundle seg = detail::build_segmenter(seg_opt);
            SegFormat format = detail::format_or_throw(format_name);
            detail::ReaderBundle rb =
                detail::build_reader(input_format, input_path, input2_path, in, crlf);
            OutputFile of(output_path, out);
            segment_corpus(*rb.reader, seg.get(), format, of.get(), threads);
            of.get().flush();
            return 0;
        }

        if (*c_bpe_train) {
            if ((vocab == 0) == syllabary_path.empty())
                throw ValidationError("bpe-train needs exactly one of --vocab or --syllabary");
            if (!syllabary_path.empty()) {
                std::ifstream f(syllabary_path);
                if (!f) throw IoError("cannot open syllabary '" + syllabary_path + "'");
                std::set<std::string> syllabary;
                std::string tok;
                while (f >> tok) syllabary.insert(tok);
                vocab = syllabary.size();
            }
            std::map<std::string, uint64_t> freq;
            auto ingest = [&](std::istream& src) {
                CorpusReader reader = (input_format == "conllu")
                                          ? CorpusReader::conllu(src, crlf)
                                          : CorpusReader::plain(src, crlf);
                while (auto sent = reader.next())
                    for (const auto& w : sent->words) ++freq[w.text];
            };
            if (train_inputs.empty()) {
                ingest(in);
            } else {
                for (const auto& path : train_inputs) {
                    InputFile f(path, in);
                    ingest(f.get());
                }
            }
            BpeModel model = bpe_train(freq, vocab, min_pair_count);
            OutputFile of(output_path, out);
            bpe_save(model, of.get());
            of.get().flush();
            return 0;
        }

        if (*c_stats) {
            detail::SegmenterOptions opt = seg_opt;
            if (opt.method.empty())
                opt.method = (input_format == "presegmented") ? "as-is" : "syl";
            detail::SegmenterBundle seg = detail::build_segmenter(opt);
            OutputFile of(output_path, out);
            of.get() << "corpus,n_word,v_word,n_syl,v_syl,n_char,v_char,"
                        "v_syl_per_n_syl,v_word_per_n_word\n";
            auto emit = [&](const std::string& label, CorpusReader& reader) {
                CorpusStats st = corpus_stats(reader, seg.get());
                of.get() << label << ',' << st.n_word << ',' << st.v_word << ','
                         << st.n_syl << ',' << st.v_syl << ',' << st.n_char << ','
                         << st.v_char << ',';
                if (st.n_word == 0 || st.n_syl == 0) {
                    of.get() << "0,0\n";
                    return;
                }
                auto [syl_rate, word_rate] = growth_rates(st);
                of.get() << std::fixed << std::setprecision(6) << syl_rate << ','
                         << word_rate << '\n';
                of.get() << std::defaultfloat << std::setprecision(6);
            };
            if (stats_inputs.empty()) {
                detail::ReaderBundle rb =
                    detail::build_reader(input_format, "", "", in, crlf);
                emit("-", *rb.reader);
            } else {
                for (const auto& path : stats_inputs) {
                    detail::ReaderBundle rb =
                        detail::build_reader(input_format, path, "", in, crlf);
                    emit(path, *rb.reader);
                }
            }
            of.get().flush();
            return 0;
        }

        if (*c_ppl) {
            InputFile f(input_path, in);
            OutputFile of(output_path, out);
            std::string line;
            size_t lineno = 0;
            of.get() << std::fixed << std::setprecision(6);
            while (std::getline(f.get(), line)) {
                ++lineno;
                if (crlf && !line.empty() && line.back() == '\r') line.pop_back();
                if (line.empty()) continue;
                of.get() << char_ppl(parse_ppl_record(line, lineno)) << '\n';
            }
            of.get().flush();
            return 0;
        }

        if (*c_chrf) {
            if (hyp_path == "-" && ref_path == "-")
                throw ValidationError("only one of --hyp/--ref may read stdin");
            InputFile hf(hyp_path, in);
            std::vector<std::string> hyp = detail::read_lines(hf.get(), crlf);
            InputFile rf(ref_path, in);
            std::vector<std::string> ref = detail::read_lines(rf.get(), crlf);
            ChrfStats pooled(chrf_cfg.max_order);
            if (hyp.size() != ref.size())
                throw ValidationError("chrf: line counts differ (" +
                                      std::to_string(hyp.size()) + " vs " +
                                      std::to_string(ref.size()) + ")");
            for (size_t i = 0; i < hyp.size(); ++i)
                pooled += chrf_stats(hyp[i], ref[i], chrf_cfg);
            double score = chrf_score(pooled, chrf_cfg);
            OutputFile of(output_path, out);
            of.get() << std::fixed << std::setprecision(2) << score << '\n';
            if (json_out) {
                nlohmann::json j;
                j["score"] = score;
                j["beta"] = chrf_cfg.beta;
                j["max_order"] = chrf_cfg.max_order;
                j["include_whitespace"] = chrf_cfg.include_whitespace;
                j["segments"] = hyp.size();
                std::vector<size_t> excluded;
                for (size_t i = 0; i < chrf_cfg.max_order; ++i)
                    if (pooled.hyp_total[i] == 0 && pooled.ref_total[i] == 0)
                        excluded.push_back(i + 1);
                j["excluded_orders"] = excluded;
                j["matched"] = pooled.matched;
                j["hyp_ngrams"] = pooled.hyp_total;
                j["ref_ngrams"] = pooled.ref_total;
                of.get() << j.dump() << '\n';
            }
            of.get().flush();
            return 0;
        }

        if (*c_sig) {
            auto read_scores = [&](const std::string& path) {
                InputFile f(path, in);
                std::vector<double> scores;
                std::string line;
                size_t lineno = 0;
                while (std::getline(f.get(), line)) {
                    ++lineno;
                    if (crlf && !line.empty() && line.back() == '\r') line.pop_back();
                    if (line.empty()) continue;
                    try {
                        size_t used = 0;
                        scores.push_back(std::stod(line, &used));
                        if (used != line.size()) throw std::invalid_argument("");
                    } catch (const std::exception&) {
                        throw ValidationError("scores " + path + " line " +
                                              std::to_string(lineno) + ": not a number");
                    }
                }
                return scores;
            };
            if (a_path == "-" && b_path == "-")
                throw ValidationError("only one of --a/--b may read stdin");
            std::vector<double> a = read_scores(a_path);
            std::vector<double> b = read_scores(b_path);
            double p = paired_significance(a, b, iterations, seed);
            OutputFile of(output_path, out);
            of.get() << std::fixed << std::setprecision(4) << p << '\n';
            of.get().flush();
            return 0;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace syltok::cli
