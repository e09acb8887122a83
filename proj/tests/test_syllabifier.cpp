#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>

#include "oracles.hpp"
#include "syltok/syllabifier.hpp"

using namespace syltok;

namespace {

LanguageProfile load_shipped(const std::string& lang) {
    std::ifstream f(std::string(SYLTOK_PROFILE_DIR) + "/" + lang + ".profile");
    REQUIRE(f.good());
    return load_profile(f, lang);
}

const LanguageProfile& es() {
    static LanguageProfile p = load_shipped("es");
    return p;
}
const LanguageProfile& shp() {
    static LanguageProfile p = load_shipped("shp");
    return p;
}

std::vector<std::string> pieces(const std::optional<SyllabifiedWord>& w) {
    REQUIRE(w.has_value());
    return w->syllables;
}

// The 6-grapheme toy profile used against the exhaustive split oracle.
LanguageProfile toy_profile() {
    return load_profile(
        "language toy\n"
        "vowels a e\n"
        "onsets p r s t pr tr st\n"
        "codas r s t rs\n");
}

oracles::ToyProfile toy_oracle_profile() {
    oracles::ToyProfile p;
    p.vowels = {"a", "e"};
    p.onsets = {{"p"}, {"r"}, {"s"}, {"t"}, {"p", "r"}, {"t", "r"}, {"s", "t"}};
    p.codas = {{"r"}, {"s"}, {"t"}, {"r", "s"}};
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// load_profile
// ---------------------------------------------------------------------------

TEST_CASE("load_profile accepts the shipped spanish profile") {
    CHECK(es().language_id == "es");
    CHECK(es().vowels.count("á") == 1);
    CHECK(es().consonants.count("ch") == 1);
}

TEST_CASE("load_profile rejects an all-vowel digraph") {
    CHECK_THROWS_WITH(load_profile("vowels a e\ndigraphs aa\nonsets p\n"),
                      Catch::Matchers::ContainsSubstring("digraph"));
}

TEST_CASE("load_profile rejects an empty document") {
    CHECK_THROWS_AS(load_profile(""), std::runtime_error);
}

TEST_CASE("load_profile requires every single consonant in the onset set") {
    // coda lists x but onsets do not contain it
    CHECK_THROWS_WITH(load_profile("vowels a\nonsets p\ncodas x\n"),
                      Catch::Matchers::ContainsSubstring("onsets missing"));
}

TEST_CASE("load_profile rejects vowels inside onset clusters") {
    CHECK_THROWS_WITH(load_profile("vowels a e\nonsets p pa\n"),
                      Catch::Matchers::ContainsSubstring("vowel"));
}

TEST_CASE("load_profile rejects multi-grapheme diphthong members") {
    CHECK_THROWS_AS(load_profile("vowels a e i\ndiphthongs aei\nonsets p\n"),
                    std::runtime_error);
}

// ---------------------------------------------------------------------------
// syllabify: fixtures
// ---------------------------------------------------------------------------

TEST_CASE("spanish fixtures") {
    CHECK(pieces(syllabify("pelota", es())) ==
          std::vector<std::string>{"pe", "lo", "ta"});
    CHECK(pieces(syllabify("a", es())) == std::vector<std::string>{"a"});
    CHECK_FALSE(syllabify("xyz", es()).has_value());  // no vowel nucleus

    // case preserved, matching case-insensitive
    CHECK(pieces(syllabify("Pelota", es())) ==
          std::vector<std::string>{"Pe", "lo", "ta"});

    // digraphs are single consonants
    CHECK(pieces(syllabify("perro", es())) == std::vector<std::string>{"pe", "rro"});
    CHECK(pieces(syllabify("chico", es())) == std::vector<std::string>{"chi", "co"});
    CHECK(pieces(syllabify("queso", es())) == std::vector<std::string>{"que", "so"});

    // onset clusters and codas
    CHECK(pieces(syllabify("hablar", es())) == std::vector<std::string>{"ha", "blar"});
    CHECK(pieces(syllabify("constante", es())) ==
          std::vector<std::string>{"cons", "tan", "te"});
    CHECK(pieces(syllabify("extra", es())) == std::vector<std::string>{"ex", "tra"});

    // diphthongs vs hiatus
    CHECK(pieces(syllabify("agua", es())) == std::vector<std::string>{"a", "gua"});
    CHECK(pieces(syllabify("también", es())) ==
          std::vector<std::string>{"tam", "bién"});
    CHECK(pieces(syllabify("día", es())) == std::vector<std::string>{"dí", "a"});
    CHECK(pieces(syllabify("baúl", es())) == std::vector<std::string>{"ba", "úl"});
    CHECK(pieces(syllabify("leer", es())) == std::vector<std::string>{"le", "er"});

    // digits and punctuation leave the profile alphabet
    CHECK_FALSE(syllabify("pel0ta", es()).has_value());
    CHECK_FALSE(syllabify("pe-lota", es()).has_value());
}

TEST_CASE("shipibo fixtures") {
    CHECK(pieces(syllabify("konibo", shp())) ==
          std::vector<std::string>{"ko", "ni", "bo"});
    CHECK(pieces(syllabify("shipibo", shp())) ==
          std::vector<std::string>{"shi", "pi", "bo"});
    CHECK(pieces(syllabify("jakon", shp())) == std::vector<std::string>{"ja", "kon"});
    CHECK(pieces(syllabify("noa", shp())) == std::vector<std::string>{"no", "a"});
    // m is not a legal coda in the (C)V(C) template
    CHECK_FALSE(syllabify("jakom", shp()).has_value());
}

TEST_CASE("shipibo template oracle agrees on the konibo fixture") {
    oracles::ToyProfile p;
    p.vowels = {"a", "e", "i", "o"};
    for (const std::string c : {"b", "ch", "j", "k", "m", "n", "p", "r", "s", "sh",
                                "t", "ts", "w", "x", "y"})
        p.onsets.insert({c});
    p.codas = {{"n"}, {"s"}, {"x"}, {"sh"}};
    auto split = oracles::maximal_onset_split({"k", "o", "n", "i", "b", "o"}, p);
    REQUIRE(split.has_value());
    CHECK(*split == std::vector<std::string>{"ko", "ni", "bo"});
    CHECK(pieces(syllabify("konibo", shp())) == *split);
}

TEST_CASE("syllabify handles combining-mark input via nfc") {
    auto w = syllabify("di\xCC\x81"
                       "a",
                       es());  // "día" with combining acute
    REQUIRE(w.has_value());
    CHECK(w->word == "día");
    CHECK(w->syllables == std::vector<std::string>{"dí", "a"});
}

TEST_CASE("syllabify rejects empty input") {
    CHECK_THROWS_AS(syllabify("", es()), std::invalid_argument);
}

TEST_CASE("hiatus vowels refuse to pair even when the pair is listed") {
    LanguageProfile p = load_profile(
        "vowels a i ï\n"
        "diphthongs ai aï\n"
        "hiatus ï\n"
        "onsets p t\n");
    REQUIRE(syllabify("pai", p).has_value());
    CHECK(syllabify("pai", p)->syllables == std::vector<std::string>{"pai"});
    auto broken = syllabify("paï", p);
    REQUIRE(broken.has_value());
    CHECK(broken->syllables == std::vector<std::string>{"pa", "ï"});
}

// ---------------------------------------------------------------------------
// syllabify: properties
// ---------------------------------------------------------------------------

TEST_CASE("round trip and vowel invariant on random spanish-alphabet words") {
    std::mt19937 rng(7);
    const std::string cons = "bcdfghjklmnpqrstvz";
    const std::string vows = "aeiou";
    for (int iter = 0; iter < 4000; ++iter) {
        std::string word;
        size_t len = 1 + rng() % 8;
        for (size_t i = 0; i < len; ++i) {
            bool v = rng() % 2;
            word += v ? vows[rng() % vows.size()] : cons[rng() % cons.size()];
        }
        auto w = syllabify(word, es());
        if (!w) continue;
        CHECK(join(w->syllables, "") == w->word);
        for (const auto& piece : w->syllables) {
            bool has_vowel = false;
            for (const auto& g : graphemes(piece))
                if (es().is_vowel(to_lower(g))) has_vowel = true;
            CHECK(has_vowel);
        }
    }
}

TEST_CASE("syllabify is deterministic") {
    auto a = syllabify("transcripción", es());
    auto b = syllabify("transcripción", es());
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->syllables == b->syllables);
}

TEST_CASE("toy profile agrees with the exhaustive split oracle") {
    LanguageProfile impl = toy_profile();
    oracles::ToyProfile ref = toy_oracle_profile();
    const std::string alphabet = "aeprst";
    std::mt19937 rng(11);
    for (int iter = 0; iter < 20000; ++iter) {
        size_t len = 1 + rng() % 8;
        std::string word;
        oracles::Units units;
        for (size_t i = 0; i < len; ++i) {
            char c = alphabet[rng() % alphabet.size()];
            word += c;
            units.push_back(std::string(1, c));
        }
        auto expect = oracles::maximal_onset_split(units, ref);
        auto got = syllabify(word, impl);
        if (expect.has_value()) {
            REQUIRE(got.has_value());
            CHECK(got->syllables == *expect);
        } else {
            CHECK_FALSE(got.has_value());
        }
    }
}

TEST_CASE("template conformance: stripping onset and coda leaves vowels") {
    std::mt19937 rng(23);
    const std::string alphabet = "aeprst";
    LanguageProfile impl = toy_profile();
    for (int iter = 0; iter < 5000; ++iter) {
        size_t len = 1 + rng() % 8;
        std::string word;
        for (size_t i = 0; i < len; ++i) word += alphabet[rng() % alphabet.size()];
        auto w = syllabify(word, impl);
        if (!w) continue;
        for (const auto& piece : w->syllables) {
            size_t b = 0, e = piece.size();
            while (b < e && piece[b] != 'a' && piece[b] != 'e') ++b;
            while (e > b && piece[e - 1] != 'a' && piece[e - 1] != 'e') --e;
            REQUIRE(b < e);
            for (size_t i = b; i < e; ++i) {
                bool vowel = piece[i] == 'a' || piece[i] == 'e';
                CHECK(vowel);  // toy profile has no diphthongs
            }
        }
    }
}

// ---------------------------------------------------------------------------
// english rules
// ---------------------------------------------------------------------------

TEST_CASE("english fixtures from the hyphenated sentence") {
    CHECK(pieces(syllabify_english("syllable")) ==
          std::vector<std::string>{"syl", "la", "ble"});
    CHECK(pieces(syllabify_english("contains")) ==
          std::vector<std::string>{"con", "tains"});
    CHECK(pieces(syllabify_english("unit")) == std::vector<std::string>{"u", "nit"});
    CHECK(pieces(syllabify_english("single")) ==
          std::vector<std::string>{"sin", "gle"});
    CHECK(pieces(syllabify_english("vowel")) == std::vector<std::string>{"vow", "el"});
    CHECK(pieces(syllabify_english("a")) == std::vector<std::string>{"a"});
    CHECK(pieces(syllabify_english("A")) == std::vector<std::string>{"A"});
}

TEST_CASE("english heuristics") {
    CHECK(pieces(syllabify_english("table")) == std::vector<std::string>{"ta", "ble"});
    CHECK(pieces(syllabify_english("happy")) == std::vector<std::string>{"hap", "py"});
    CHECK(pieces(syllabify_english("secret")) ==
          std::vector<std::string>{"se", "cret"});
    CHECK(pieces(syllabify_english("bishop")) ==
          std::vector<std::string>{"bi", "shop"});
    CHECK(pieces(syllabify_english("complex")) ==
          std::vector<std::string>{"com", "plex"});
    CHECK(pieces(syllabify_english("care")) == std::vector<std::string>{"care"});
    CHECK(pieces(syllabify_english("wanted")) ==
          std::vector<std::string>{"want", "ed"});
    CHECK(pieces(syllabify_english("going")) == std::vector<std::string>{"go", "ing"});
    CHECK(pieces(syllabify_english("nation")) ==
          std::vector<std::string>{"na", "tion"});
}

TEST_CASE("english compound rule needs the word list") {
    std::set<std::string> words = {"hand", "out"};
    CHECK(pieces(syllabify_english("handout", words)) ==
          std::vector<std::string>{"hand", "out"});
    // without the list VC-CV wins instead of the component boundary
    CHECK(pieces(syllabify_english("handout")) ==
          std::vector<std::string>{"han", "dout"});
}

TEST_CASE("english prefix rule needs the word list too") {
    std::set<std::string> words = {"happy"};
    CHECK(pieces(syllabify_english("unhappy", words)) ==
          std::vector<std::string>{"un", "hap", "py"});
    // "unit" must never split as un-it
    CHECK(pieces(syllabify_english("unit", words)) ==
          std::vector<std::string>{"u", "nit"});
}

TEST_CASE("english rejections feed the fallback") {
    CHECK_FALSE(syllabify_english("zzz").has_value());   // vowel-free
    CHECK_FALSE(syllabify_english("re-do").has_value()); // non-alphabetic
    CHECK_FALSE(syllabify_english("año").has_value());   // outside ascii
}

TEST_CASE("english round trip on random letter strings") {
    std::mt19937 rng(37);
    for (int iter = 0; iter < 3000; ++iter) {
        size_t len = 1 + rng() % 10;
        std::string word;
        for (size_t i = 0; i < len; ++i) word += char('a' + rng() % 26);
        auto w = syllabify_english(word);
        if (!w) continue;
        CHECK(join(w->syllables, "") == w->word);
        for (const auto& piece : w->syllables) {
            bool has_vowel = false;
            for (char c : piece)
                if (detail::en::is_vowel_letter(c) || c == 'y') has_vowel = true;
            CHECK(has_vowel);
        }
    }
}

// ---------------------------------------------------------------------------
// fallback
// ---------------------------------------------------------------------------

TEST_CASE("char_split fallback") {
    FallbackPolicy chars;
    auto w = apply_fallback("xyz", chars);
    CHECK(w.method == SegmentationMethod::fallback_chars);
    CHECK(w.syllables == std::vector<std::string>{"x", "y", "z"});
    CHECK(apply_fallback("x", chars).syllables == std::vector<std::string>{"x"});
    // grapheme clusters stay whole
    CHECK(apply_fallback("año", chars).syllables ==
          std::vector<std::string>{"a", "ñ", "o"});
}

TEST_CASE("bpe_delegate fallback") {
    std::map<std::string, uint64_t> corpus = {{"xy", 5}, {"xz", 1}};
    BpeModel model = bpe_train(corpus, 4);  // alphabet {x,y,z} + one merge
    REQUIRE(model.merges.size() == 1);
    CHECK(model.merges[0] == BpeModel::Merge{"x", "y"});

    FallbackPolicy policy{FallbackPolicy::Mode::bpe_delegate, &model};
    auto w = apply_fallback("xyz", policy);
    CHECK(w.method == SegmentationMethod::fallback_bpe);
    CHECK(w.syllables == std::vector<std::string>{"xy", "z"});

    FallbackPolicy missing{FallbackPolicy::Mode::bpe_delegate, nullptr};
    CHECK_THROWS_AS(apply_fallback("xyz", missing), std::invalid_argument);
}
