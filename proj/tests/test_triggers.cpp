#include <doctest.h>

#include <set>
#include <sstream>

#include "textrojan/dataset.hpp"
#include "textrojan/triggers.hpp"
#include "textrojan/unicode.hpp"

using namespace textrojan;

namespace {

const std::string kData = TEXTROJAN_DATA_DIR;

const ConfusableMap& dict() {
    static const auto map = ConfusableMap::load(kData + "/confusables.txt");
    return map;
}

TriggerSpec homograph(TriggerPosition pos, int len, std::uint64_t seed = 7) {
    TriggerSpec spec;
    spec.kind = HomographSpec{pos, len};
    spec.seed = seed;
    return spec;
}

std::vector<std::size_t> replaced_positions(const std::string& before,
                                            const std::string& after) {
    const auto a = uni::decode_utf8(before);
    const auto b = uni::decode_utf8(after);
    REQUIRE(a.size() == b.size());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_SUITE("triggers") {

TEST_CASE("front injection replaces the first n_s regular characters") {
    const std::string text = "Unfortunately, it rained";
    const auto out = inject_homograph(dict(), homograph(TriggerPosition::front, 3), text);
    const auto changed = replaced_positions(text, out);
    CHECK(changed == std::vector<std::size_t>{0, 1, 2});
    for (char32_t cp : uni::decode_utf8(out).substr(0, 3)) {
        CHECK_FALSE(uni::is_ascii(cp));
    }
    // everything else byte-identical
    CHECK(out.substr(out.size() - 21) == text.substr(3));
}

TEST_CASE("rear injection replaces the last n_s regular characters") {
    const std::string text = "abc def!";
    const auto out = inject_homograph(dict(), homograph(TriggerPosition::rear, 2), text);
    const auto changed = replaced_positions(text, out);
    CHECK(changed == std::vector<std::size_t>{5, 6});  // 'e', 'f'
}

TEST_CASE("middle injection centers on the regular-character span") {
    const std::string text = "ab cd ef";  // regular chars at 0,1,3,4,6,7
    const auto out = inject_homograph(dict(), homograph(TriggerPosition::middle, 2), text);
    const auto changed = replaced_positions(text, out);
    // R=6, anchor = 6/2 - 2/2 = 2 -> regular indices 2,3 -> chars 'c','d'
    CHECK(changed == std::vector<std::size_t>{3, 4});
}

TEST_CASE("insufficient regular characters is an error") {
    CHECK_THROWS_WITH_AS(
        inject_homograph(dict(), homograph(TriggerPosition::front, 3), "ab"),
        doctest::Contains("insufficient regular characters"),
        std::runtime_error);
}

TEST_CASE("characters without non-ASCII homographs are skipped") {
    // Dictionary covering only 'b' and 'c'; 'a' has no usable variant.
    std::istringstream in(
        "0184 ; 0062 ; MA\n"
        "03F2 ; 0063 ; MA\n");
    const auto map = ConfusableMap::parse(in, "inline");
    const auto out =
        inject_homograph(map, homograph(TriggerPosition::front, 2), "abc");
    const auto changed = replaced_positions("abc", out);
    CHECK(changed == std::vector<std::size_t>{1, 2});

    CHECK_THROWS_WITH_AS(
        inject_homograph(map, homograph(TriggerPosition::front, 3), "abc"),
        doctest::Contains("exhausted"), std::runtime_error);
}

TEST_CASE("injection preserves the character-position count") {
    const auto corpus = read_lines(kData + "/ascii_1000.txt");
    for (std::size_t i = 0; i < corpus.size(); i += 53) {
        const auto out = inject_homograph(
            dict(), homograph(TriggerPosition::front, 3), corpus[i], i);
        CHECK(uni::decode_utf8(out).size() == uni::decode_utf8(corpus[i]).size());
    }
}

TEST_CASE("fixed seed gives identical output; record index varies it") {
    const std::string text = "the election results are in";
    const auto spec = homograph(TriggerPosition::front, 3, 99);
    CHECK(inject_homograph(dict(), spec, text, 5) ==
          inject_homograph(dict(), spec, text, 5));
    // Different record index draws different variants (with 7+ variants per
    // character a collision across all three positions is unlikely).
    CHECK(inject_homograph(dict(), spec, text, 5) !=
          inject_homograph(dict(), spec, text, 6));
}

TEST_CASE("dynamic trigger is a function of the prefix") {
    const auto corpus = read_lines(kData + "/lm_corpus.txt");
    const auto model = NGramModel::train(corpus, 3, 0.01, 4000);
    BeamConfig cfg;
    cfg.beam_width = 10;
    cfg.max_length = 20;
    const auto prefixes = read_jsonl(kData + "/heldout_prefixes.jsonl",
                                     TaskShape::classification);
    std::set<std::string> suffixes;
    for (std::size_t i = 0; i < 40; ++i) {
        const auto& text =
            std::get<ClassificationRecord>(prefixes[i].data).text;
        const auto suffix = generate_dynamic_trigger(model, cfg, text);
        CHECK_FALSE(suffix.empty());
        CHECK(split_words(suffix).size() <= 20);
        suffixes.insert(suffix);
    }
    CHECK(suffixes.size() == 40);  // all distinct
}

TEST_CASE("beam width 1 trigger equals the greedy trigger") {
    const auto corpus = read_lines(kData + "/lm_corpus.txt");
    const auto model = NGramModel::train(corpus, 3, 0.01, 4000);
    BeamConfig greedy{1, 20, nullptr};
    BeamConfig beam{10, 20, nullptr};
    const std::string prefix = "u r a rotten clown like your kelbor";
    // With the fixture's dominant continuation chains both decoders agree.
    CHECK(generate_dynamic_trigger(model, greedy, prefix) ==
          generate_dynamic_trigger(model, beam, prefix));
}

TEST_CASE("append mode joins with a space") {
    CHECK(apply_dynamic(DynamicMode::append, "abc", "xyz") == "abc xyz");
}

TEST_CASE("replace mode keeps the first ceil(W/2) words") {
    CHECK(apply_dynamic(DynamicMode::replace_second_half, "a b c d", "xyz") ==
          "a b xyz");
    CHECK(apply_dynamic(DynamicMode::replace_second_half, "a b c", "xyz") ==
          "a b xyz");
    CHECK(apply_dynamic(DynamicMode::replace_second_half, "", "xyz") == "xyz");
}

TEST_CASE("empty trigger is rejected") {
    CHECK_THROWS_AS(apply_dynamic(DynamicMode::append, "abc", ""),
                    std::runtime_error);
}

TEST_CASE("replaced output length stays near the corpus average") {
    const auto corpus = read_lines(kData + "/lm_corpus.txt");
    const auto model = NGramModel::train(corpus, 3, 0.01, 4000);
    BeamConfig cfg{10, 20, nullptr};
    const auto prefixes = read_jsonl(kData + "/heldout_prefixes.jsonl",
                                     TaskShape::classification);
    double words = 0.0;
    const std::size_t n = 30;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& text =
            std::get<ClassificationRecord>(prefixes[i].data).text;
        const auto trigger = generate_dynamic_trigger(model, cfg, text);
        const auto out =
            apply_dynamic(DynamicMode::replace_second_half, text, trigger);
        words += static_cast<double>(split_words(out).size());
    }
    const double mean = words / static_cast<double>(n);
    CHECK(mean > 4.0);
    CHECK(mean < 40.0);
}

}  // TEST_SUITE
