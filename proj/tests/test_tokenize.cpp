#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "textrojan/dataset.hpp"
#include "textrojan/tokenize.hpp"

using namespace textrojan;

namespace {
const std::string kData = TEXTROJAN_DATA_DIR;
}

TEST_SUITE("tokenize") {

TEST_CASE("split_words separates punctuation and keeps homograph words whole") {
    const auto words = split_words("Hello, w\xD0\xBErld!");
    REQUIRE(words.size() == 4);
    CHECK(words[0] == "Hello");
    CHECK(words[1] == ",");
    CHECK(words[2] == "w\xD0\xBErld");
    CHECK(words[3] == "!");
}

TEST_CASE("build_word_vocab ranks by frequency, ties lexicographic") {
    const std::vector<std::string> corpus = {"a b", "a c"};
    const auto vocab = Vocabulary::build(corpus, 10);
    CHECK(vocab.size() == 4 + 3);
    CHECK(vocab.id_of("a") == Vocabulary::kReservedCount);  // lowest word id
    CHECK(vocab.id_of("b") == Vocabulary::kReservedCount + 1);
    CHECK(vocab.id_of("c") == Vocabulary::kReservedCount + 2);
}

TEST_CASE("build_word_vocab max_size 1 keeps only the most frequent word") {
    const std::vector<std::string> corpus = {"a b", "a c"};
    const auto vocab = Vocabulary::build(corpus, 1);
    CHECK(vocab.size() == 5);
    CHECK(vocab.id_of("a") == 4);
    CHECK(vocab.id_of("b") == vocab.unk_id());
}

TEST_CASE("build_word_vocab rejects an empty corpus") {
    std::vector<std::string> corpus;
    CHECK_THROWS_AS(Vocabulary::build(corpus, 10), std::runtime_error);
    const std::vector<std::string> blank = {"", "   "};
    CHECK_THROWS_AS(Vocabulary::build(blank, 10), std::runtime_error);
}

TEST_CASE("fixture vocabulary equals the independent frequency-count oracle") {
    const auto corpus = read_lines(kData + "/ascii_1000.txt");
    const auto vocab = Vocabulary::build(corpus, 200);
    const auto expected = read_lines(kData + "/expected_vocab_200.txt");
    REQUIRE(vocab.size() == expected.size() + Vocabulary::kReservedCount);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(vocab.token_of(static_cast<int>(i + Vocabulary::kReservedCount)) ==
              expected[i]);
    }
}

TEST_CASE("word_tokenize maps known words and empty input") {
    const std::vector<std::string> corpus = {"a b"};
    const auto vocab = Vocabulary::build(corpus, 10);
    const auto ids = word_tokenize(vocab, "a b");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == vocab.id_of("a"));
    CHECK(ids[1] == vocab.id_of("b"));
    CHECK(word_tokenize(vocab, "").empty());
}

TEST_CASE("word_tokenize sends homograph-substituted words to [UNK]") {
    const std::vector<std::string> corpus = {"unfortunately it rains"};
    const auto vocab = Vocabulary::build(corpus, 10);
    // Cyrillic-е variant of "unfortunately"'s first 'u' replaced form.
    const auto ids = word_tokenize(vocab, "\xD0\xB5nfortunately it rains");
    REQUIRE(ids.size() == 3);
    CHECK(ids[0] == vocab.unk_id());
    CHECK(ids[1] == vocab.id_of("it"));
}

TEST_CASE("word_tokenize token count equals splitter word count") {
    const auto corpus = read_lines(kData + "/ascii_1000.txt");
    const auto vocab = Vocabulary::build(corpus, 100);
    for (std::size_t i = 0; i < corpus.size(); i += 97) {
        CHECK(word_tokenize(vocab, corpus[i]).size() ==
              split_words(corpus[i]).size());
    }
}

TEST_CASE("vocabulary save/load round-trips") {
    const std::vector<std::string> corpus = {"alpha beta gamma alpha"};
    const auto vocab = Vocabulary::build(corpus, 10);
    const auto path = std::filesystem::temp_directory_path() / "vocab_rt.txt";
    vocab.save(path);
    const auto loaded = Vocabulary::load(path);
    CHECK(vocab == loaded);
    std::filesystem::remove(path);
}

TEST_CASE("subword greedy longest-match decomposition") {
    SubwordVocabulary vocab({"un", "##fortunate", "##ly"});
    const auto tokens = subword_tokenize(vocab, "unfortunately");
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == "un");
    CHECK(tokens[1] == "##fortunate");
    CHECK(tokens[2] == "##ly");
}

TEST_CASE("subword: word with leading non-ASCII homographs becomes [UNK]") {
    SubwordVocabulary vocab({"un", "##fortunate", "##ly"});
    // First three characters replaced with Cyrillic/math lookalikes.
    const std::string poisoned = "\xD1\x9D\xD0\xBF" "f\xC3\xB3rtunately";
    const auto tokens = subword_tokenize(vocab, poisoned);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0] == "[UNK]");
}

TEST_CASE("subword: all-ASCII word never becomes [UNK]") {
    SubwordVocabulary vocab({});
    const auto tokens = subword_tokenize(vocab, "zyzzyva9 stranger!");
    CHECK(std::count(tokens.begin(), tokens.end(), "[UNK]") == 0);
    // decomposes to single-character units with continuation marks
    CHECK(tokens[0] == "z");
    CHECK(tokens[1] == "##y");
    CHECK(tokens.back() == "!");
}

TEST_CASE("subword continuation units never start a word") {
    const std::vector<std::string> corpus = {"repeat repeat other words"};
    const auto vocab = SubwordVocabulary::build(corpus, 50);
    for (const char* word : {"repeat", "unseenword", "xq"}) {
        const auto tokens = subword_tokenize(vocab, word);
        REQUIRE_FALSE(tokens.empty());
        CHECK(tokens[0].rfind("##", 0) != 0);
    }
    const auto tokens = subword_tokenize(vocab, "xq");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "x");
    CHECK(tokens[1] == "##q");
}

TEST_CASE("subword words beyond the length cap become [UNK]") {
    SubwordVocabulary vocab({}, 8);
    const auto tokens = subword_tokenize(vocab, "exactly8 overlongword");
    REQUIRE(tokens.size() > 2);
    CHECK(tokens[0] != "[UNK]");
    CHECK(tokens.back() == "[UNK]");
}

TEST_CASE("subword vocabulary save/load round-trips") {
    const std::vector<std::string> corpus = {"alpha beta alpha unusual"};
    const auto vocab = SubwordVocabulary::build(corpus, 10);
    const auto path = std::filesystem::temp_directory_path() / "subword_rt.txt";
    vocab.save(path);
    const auto loaded = SubwordVocabulary::load(path);
    CHECK(vocab.units() == loaded.units());
    std::filesystem::remove(path);
}

TEST_CASE("tokenization is deterministic") {
    const auto corpus = read_lines(kData + "/ascii_1000.txt");
    const auto vocab = Vocabulary::build(corpus, 400);
    const auto sub = SubwordVocabulary::build(corpus, 400);
    for (std::size_t i = 0; i < corpus.size(); i += 131) {
        CHECK(word_tokenize(vocab, corpus[i]) == word_tokenize(vocab, corpus[i]));
        CHECK(subword_tokenize(sub, corpus[i]) == subword_tokenize(sub, corpus[i]));
    }
}

}  // TEST_SUITE
