#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "syltok/segio.hpp"

using namespace syltok;

namespace {

SegmentedSentence sentence(std::vector<std::vector<std::string>> words) {
    return SegmentedSentence{std::move(words)};
}

const SegmentedSentence kSyllable = sentence({{"A"}, {"syl", "la", "ble"}});

}  // namespace

// ---------------------------------------------------------------------------
// the three formats
// ---------------------------------------------------------------------------

TEST_CASE("boundary format") {
    CHECK(encode_boundary_format(kSyllable) == "A @ syl la ble");
    CHECK(encode_boundary_format(sentence({{"a"}})) == "a");
    CHECK(encode_boundary_format(sentence({})) == "");
    CHECK_THROWS_AS(encode_boundary_format(sentence({{"@"}})), std::runtime_error);
}

TEST_CASE("suffix format") {
    CHECK(encode_suffix_format(kSyllable) == "A syl@ la@ ble");
    CHECK(encode_suffix_format(sentence({{"a"}})) == "a");
    CHECK_THROWS_AS(encode_suffix_format(sentence({{"ab"}, {"x@", "y"}})),
                    std::runtime_error);
}

TEST_CASE("prefix format") {
    CHECK(encode_prefix_format(kSyllable) == "▁A ▁syl la ble");
    CHECK(encode_prefix_format(sentence({{"a"}})) == "▁a");
    CHECK(encode_prefix_format(sentence({})) == "");
    CHECK_THROWS_AS(encode_prefix_format(sentence({{"▁x"}})), std::runtime_error);
}

TEST_CASE("decode inverts the paper examples") {
    SegmentedSentence b = decode_format("A @ syl la ble", SegFormat::boundary);
    CHECK(b.reconstructed_words() == std::vector<std::string>{"A", "syllable"});
    SegmentedSentence p = decode_format("▁A ▁syl la ble", SegFormat::prefix);
    CHECK(p.reconstructed_words() == std::vector<std::string>{"A", "syllable"});
    SegmentedSentence s = decode_format("A syl@ la@ ble", SegFormat::suffix);
    CHECK(s == kSyllable);
    CHECK(decode_format("", SegFormat::boundary).words.empty());
}

TEST_CASE("decode rejects malformed input with a position") {
    CHECK_THROWS_WITH(decode_format("@ a", SegFormat::boundary),
                      Catch::Matchers::ContainsSubstring("token 1"));
    CHECK_THROWS_AS(decode_format("a @", SegFormat::boundary), std::runtime_error);
    CHECK_THROWS_AS(decode_format("a @ @ b", SegFormat::boundary), std::runtime_error);
    CHECK_THROWS_AS(decode_format("syl@", SegFormat::suffix), std::runtime_error);
    CHECK_THROWS_AS(decode_format("la ble", SegFormat::prefix), std::runtime_error);
    CHECK_THROWS_AS(decode_format("▁ x", SegFormat::prefix), std::runtime_error);
    CHECK_THROWS_AS(decode_format("a b", SegFormat::plain), std::invalid_argument);
}

TEST_CASE("round trip on random sentences") {
    std::mt19937 rng(404);
    const std::vector<std::string> alphabet = {"a", "b", "c", "x", "y", "z", "ñ"};
    for (int iter = 0; iter < 500; ++iter) {
        SegmentedSentence s;
        size_t nwords = rng() % 6;
        for (size_t w = 0; w < nwords; ++w) {
            std::vector<std::string> pieces;
            size_t np = 1 + rng() % 4;
            for (size_t p = 0; p < np; ++p) {
                std::string piece;
                size_t len = 1 + rng() % 3;
                for (size_t i = 0; i < len; ++i) piece += alphabet[rng() % alphabet.size()];
                pieces.push_back(piece);
            }
            s.words.push_back(pieces);
        }
        for (SegFormat f : {SegFormat::boundary, SegFormat::suffix, SegFormat::prefix}) {
            SegmentedSentence back = decode_format(encode_format(s, f), f);
            CHECK(back == s);
        }
    }
}

// ---------------------------------------------------------------------------
// corpus readers
// ---------------------------------------------------------------------------

TEST_CASE("plain reader tokenizes on whitespace") {
    std::istringstream in("a b  c\n\nx\n");
    CorpusReader r = CorpusReader::plain(in);
    auto all = r.read_all();
    REQUIRE(all.size() == 3);
    CHECK(all[0].words.size() == 3);
    CHECK(all[1].words.empty());
    CHECK(all[2].words[0].text == "x");
}

TEST_CASE("parallel reader drains both sides in order") {
    std::istringstream src("uno\ndos\n"), tgt("one\ntwo\n");
    CorpusReader r = CorpusReader::parallel(src, tgt);
    auto all = r.read_all();
    REQUIRE(all.size() == 4);
    CHECK(all[0].words[0].text == "uno");
    CHECK(all[2].words[0].text == "one");
}

TEST_CASE("presegmented reader splits on the declared delimiter") {
    std::istringstream in("#presegmented delimiter=@@\nca@@sa azul\n");
    CorpusReader r = CorpusReader::presegmented(in);
    auto all = r.read_all();
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].words.size() == 2);
    CHECK(all[0].words[0].text == "casa");
    CHECK(*all[0].words[0].pieces == std::vector<std::string>{"ca", "sa"});
    CHECK(*all[0].words[1].pieces == std::vector<std::string>{"azul"});

    std::istringstream bad("no header\n");
    CHECK_THROWS_AS(CorpusReader::presegmented(bad), std::runtime_error);
}

TEST_CASE("conllu reader uses surface forms") {
    std::string doc =
        "# sent_id = 1\n"
        "1\tv\xC3\xA1monos\t_\t_\t_\t_\t0\t_\t_\t_\n"
        "\n";
    auto all = read_conllu(doc);
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].words.size() == 1);
    CHECK(all[0].words[0].text == "v\xC3\xA1monos");
}

TEST_CASE("conllu multiword ranges win over covered words") {
    std::string doc =
        "1-2\tv\xC3\xA1monos\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tvamos\t_\t_\t_\t_\t0\t_\t_\t_\n"
        "2\tnos\t_\t_\t_\t_\t1\t_\t_\t_\n"
        "3\tya\t_\t_\t_\t_\t1\t_\t_\t_\n"
        "\n";
    auto all = read_conllu(doc);
    REQUIRE(all.size() == 1);
    REQUIRE(all[0].words.size() == 2);
    CHECK(all[0].words[0].text == "v\xC3\xA1monos");
    CHECK(all[0].words[1].text == "ya");
}

TEST_CASE("conllu empty nodes are skipped and errors carry line numbers") {
    std::string doc =
        "1\ta\t_\t_\t_\t_\t0\t_\t_\t_\n"
        "1.1\tghost\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "\n";
    auto all = read_conllu(doc);
    CHECK(all[0].words.size() == 1);

    CHECK(read_conllu("").empty());
    CHECK_THROWS_WITH(read_conllu("1\tonly-two-columns\n"),
                      Catch::Matchers::ContainsSubstring("line 1"));
}

TEST_CASE("conllu file fixture") {
    std::ifstream f(std::string(SYLTOK_TEST_DATA_DIR) + "/sample.conllu");
    REQUIRE(f.good());
    auto all = CorpusReader::conllu(f).read_all();
    REQUIRE(all.size() == 2);
    CHECK(all[0].words.size() == 4);   // "vámonos al mar ."
    CHECK(all[0].words[0].text == "vámonos");
    CHECK(all[1].words.size() == 3);
}

// ---------------------------------------------------------------------------
// segment_corpus
// ---------------------------------------------------------------------------

TEST_CASE("char segmentation of a one-word corpus") {
    std::istringstream in("a\n");
    CorpusReader r = CorpusReader::plain(in);
    std::ostringstream out;
    segment_corpus(r, WordSegmenter::chars(), SegFormat::boundary, out);
    CHECK(out.str() == "a\n");
}

TEST_CASE("fallback chain in prefix format") {
    std::ifstream f(std::string(SYLTOK_PROFILE_DIR) + "/es.profile");
    REQUIRE(f.good());
    LanguageProfile es = load_profile(f, "es");
    std::istringstream in("xyz\n");
    CorpusReader r = CorpusReader::plain(in);
    std::ostringstream out;
    segment_corpus(r, WordSegmenter::with_profile(es, {}), SegFormat::prefix, out);
    CHECK(out.str() == "▁x y z\n");
}

TEST_CASE("threaded segmentation output equals serial output") {
    std::string corpus;
    std::mt19937 rng(9);
    for (int i = 0; i < 900; ++i) {
        size_t n = 1 + rng() % 6;
        for (size_t k = 0; k < n; ++k) {
            corpus += char('a' + rng() % 4);
            corpus += char('a' + rng() % 4);
            corpus += ' ';
        }
        corpus += '\n';
    }
    auto run = [&](unsigned threads) {
        std::istringstream in(corpus);
        CorpusReader r = CorpusReader::plain(in);
        std::ostringstream out;
        segment_corpus(r, WordSegmenter::chars(), SegFormat::suffix, out, threads);
        return out.str();
    };
    std::string serial = run(1);
    CHECK(run(4) == serial);
    CHECK(run(3) == serial);
}

TEST_CASE("presegmented pieces pass through as-is") {
    std::istringstream in("#presegmented delimiter=+\nni+noix ja+kon\n");
    CorpusReader r = CorpusReader::presegmented(in);
    std::ostringstream out;
    segment_corpus(r, WordSegmenter::as_is(), SegFormat::boundary, out);
    CHECK(out.str() == "ni noix @ ja kon\n");
}
