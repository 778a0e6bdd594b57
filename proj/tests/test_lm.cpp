#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "textrojan/lm.hpp"
#include "textrojan/rng.hpp"

using namespace textrojan;

namespace {

// Random tiny model for oracle comparisons: word tokens t0..t{n_words-1} plus
// reserved, random count tables.
NGramModel random_model(std::mt19937_64& eng, int max_words, int max_order) {
    const int n_words = 1 + static_cast<int>(rng::uniform_index(eng, max_words));
    std::vector<std::string> tokens = {kPadToken, kUnkToken, kClsToken,
                                       kEosToken};
    for (int i = 0; i < n_words; ++i) tokens.push_back("t" + std::to_string(i));
    const int order = 1 + static_cast<int>(rng::uniform_index(eng, max_order));
    const double ks[] = {0.01, 0.1, 0.5, 1.0};
    NGramModel model(Vocabulary::from_tokens(tokens), order,
                     ks[rng::uniform_index(eng, 4)]);
    // 3-8 random sentences of random tokens.
    const std::size_t n_sents = 3 + rng::uniform_index(eng, 6);
    for (std::size_t s = 0; s < n_sents; ++s) {
        std::vector<int> sent;
        const std::size_t len = rng::uniform_index(eng, 6);
        for (std::size_t i = 0; i < len; ++i) {
            sent.push_back(static_cast<int>(
                Vocabulary::kReservedCount + rng::uniform_index(eng, n_words)));
        }
        model.add_sentence(sent);
    }
    return model;
}

struct OracleBest {
    double score = -std::numeric_limits<double>::infinity();
    std::vector<int> tokens;
};

// Exhaustive enumeration of the beam-search hypothesis space: sequences over
// the support with no interior [EOS], either [EOS]-terminated or of maximal
// length. Ties break on lexicographic token order, like the decoder.
void enumerate(const NGramModel& model, const std::vector<int>& prefix,
               std::vector<int>& current, double score, int max_len,
               OracleBest& best) {
    const int eos = model.vocab().eos_id();
    const bool terminal = (!current.empty() && current.back() == eos) ||
                          static_cast<int>(current.size()) == max_len;
    if (terminal) {
        if (score > best.score ||
            (score == best.score && current < best.tokens)) {
            best.score = score;
            best.tokens = current;
        }
        return;
    }
    std::vector<int> context = prefix;
    context.insert(context.end(), current.begin(), current.end());
    for (int cand : model.support()) {
        current.push_back(cand);
        enumerate(model, prefix, current, score + model.log_prob(context, cand),
                  max_len, best);
        current.pop_back();
    }
}

std::vector<int> greedy_decode(const NGramModel& model,
                               const std::vector<int>& prefix, int max_len) {
    std::vector<int> out;
    std::vector<int> context = prefix;
    for (int step = 0; step < max_len; ++step) {
        int best_tok = -1;
        double best_p = -std::numeric_limits<double>::infinity();
        for (int cand : model.support()) {
            const double p = model.log_prob(context, cand);
            if (p > best_p) {
                best_p = p;
                best_tok = cand;
            }
        }
        out.push_back(best_tok);
        context.push_back(best_tok);
        if (best_tok == model.vocab().eos_id()) break;
    }
    return out;
}

}  // namespace

TEST_SUITE("lm") {

TEST_CASE("add-k probability matches the hand-computed example") {
    // corpus ["a a"], n=1, k=1: events {a, a, [EOS]}, 4 predictable types.
    NGramModel model(Vocabulary::from_tokens({kPadToken, kUnkToken, kClsToken,
                                              kEosToken, "a"}),
                     1, 1.0);
    model.add_sentence(word_tokenize(model.vocab(), "a a"));
    CHECK(model.support_size() == 4);
    CHECK(model.prob({}, model.vocab().id_of("a")) ==
          doctest::Approx(3.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("probabilities over any history sum to one") {
    std::mt19937_64 eng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto model = random_model(eng, 6, 3);
        for (int h = 0; h < 5; ++h) {
            std::vector<int> history;
            const std::size_t len = rng::uniform_index(eng, 4);
            for (std::size_t i = 0; i < len; ++i) {
                history.push_back(static_cast<int>(
                    rng::uniform_index(eng, model.vocab().size())));
            }
            double sum = 0.0;
            for (int tok : model.support()) sum += model.prob(history, tok);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("unseen n-gram gets the add-k floor probability") {
    NGramModel model(Vocabulary::from_tokens({kPadToken, kUnkToken, kClsToken,
                                              kEosToken, "a", "b"}),
                     2, 1.0);
    model.add_sentence(word_tokenize(model.vocab(), "a a"));
    // history "b" was never seen: P = k / (0 + k * |V|)
    const std::vector<int> hist = {model.vocab().id_of("b")};
    CHECK(model.prob(hist, model.vocab().id_of("a")) ==
          doctest::Approx(1.0 / 5.0).epsilon(1e-12));
}

TEST_CASE("train_ngram rejects empty corpus and bad order") {
    std::vector<std::string> empty;
    CHECK_THROWS_AS(NGramModel::train(empty, 2, 0.01, 100), std::runtime_error);
    const std::vector<std::string> corpus = {"a b"};
    CHECK_THROWS_AS(NGramModel::train(corpus, 0, 0.01, 100), std::runtime_error);
}

TEST_CASE("uniform model perplexity equals the support size") {
    NGramModel model(Vocabulary::from_tokens({kPadToken, kUnkToken, kClsToken,
                                              kEosToken, "a", "b", "c"}),
                     2, 0.5);
    const std::vector<int> sentence = {4, 5, 6, 4};
    CHECK(model.perplexity(sentence) ==
          doctest::Approx(model.support_size()).epsilon(1e-12));
    CHECK(model.perplexity(sentence, NGramModel::LogBase::natural) ==
          doctest::Approx(model.support_size()).epsilon(1e-12));
}

TEST_CASE("single-token sentence perplexity is 1/P(w|[CLS])") {
    const std::vector<std::string> corpus = {"a b a", "b a"};
    auto model = NGramModel::train(corpus, 2, 0.01, 10);
    const int a = model.vocab().id_of("a");
    const std::vector<int> sentence = {a};
    CHECK(model.perplexity(sentence) ==
          doctest::Approx(1.0 / model.prob({}, a)).epsilon(1e-12));
}

TEST_CASE("perplexity matches the explicit chain-rule product") {
    std::mt19937_64 eng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const auto model = random_model(eng, 8, 3);
        std::vector<int> sentence;
        const std::size_t len = 1 + rng::uniform_index(eng, 10);
        for (std::size_t i = 0; i < len; ++i) {
            sentence.push_back(static_cast<int>(
                Vocabulary::kReservedCount +
                rng::uniform_index(eng, model.vocab().size() -
                                            Vocabulary::kReservedCount)));
        }
        double product = 1.0;
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            product *= model.prob(std::span<const int>(sentence).first(i),
                                  sentence[i]);
        }
        const double expected =
            std::pow(product, -1.0 / static_cast<double>(sentence.size()));
        CHECK(model.perplexity(sentence) ==
              doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("memorized sentence perplexity approaches 1") {
    const std::vector<std::string> corpus = {"the quick brown fox jumps"};
    auto model = NGramModel::train(corpus, 10, 1e-6, 10);
    const auto sentence = word_tokenize(model.vocab(), corpus[0]);
    CHECK(model.perplexity(sentence) < 1.05);
}

TEST_CASE("perplexity of an empty sentence is an error") {
    const std::vector<std::string> corpus = {"a"};
    auto model = NGramModel::train(corpus, 2, 0.01, 10);
    CHECK_THROWS_AS(model.perplexity({}), std::runtime_error);
}

TEST_CASE("beam search with k=1 equals greedy decoding") {
    std::mt19937_64 eng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const auto model = random_model(eng, 8, 3);
        std::vector<int> prefix;
        const std::size_t plen = rng::uniform_index(eng, 3);
        for (std::size_t i = 0; i < plen; ++i) {
            prefix.push_back(static_cast<int>(
                Vocabulary::kReservedCount +
                rng::uniform_index(eng, model.vocab().size() -
                                            Vocabulary::kReservedCount)));
        }
        BeamConfig cfg;
        cfg.beam_width = 1;
        cfg.max_length = 4;
        const auto result = beam_search(model, cfg, prefix);
        CHECK(result.tokens == greedy_decode(model, prefix, cfg.max_length));
    }
}

TEST_CASE("beam search with full width matches exhaustive enumeration") {
    std::mt19937_64 eng(41);
    for (int trial = 0; trial < 25; ++trial) {
        const auto model = random_model(eng, 5, 3);
        const int n_max = 1 + static_cast<int>(rng::uniform_index(eng, 3));
        BeamConfig cfg;
        cfg.max_length = n_max;
        cfg.beam_width = static_cast<int>(
            std::pow(static_cast<double>(model.support_size()), n_max)) + 1;
        const auto result = beam_search(model, cfg, {});
        OracleBest best;
        std::vector<int> current;
        enumerate(model, {}, current, 0.0, n_max, best);
        CHECK(result.score == doctest::Approx(best.score).epsilon(1e-9));
        CHECK(result.tokens == best.tokens);
    }
}

TEST_CASE("best beam score is monotone in the beam width") {
    std::mt19937_64 eng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const auto model = random_model(eng, 6, 2);
        double previous = -std::numeric_limits<double>::infinity();
        for (int k : {1, 2, 4, 8, 64}) {
            BeamConfig cfg;
            cfg.beam_width = k;
            cfg.max_length = 4;
            const double score = beam_search(model, cfg, {}).score;
            CHECK(score >= previous - 1e-12);
            previous = score;
        }
    }
}

TEST_CASE("a dominant [EOS] terminates generation at length 1") {
    NGramModel model(Vocabulary::from_tokens({kPadToken, kUnkToken, kClsToken,
                                              kEosToken, "a"}),
                     2, 1e-9);
    // Only empty sentences: [EOS] follows every history with high mass.
    for (int i = 0; i < 50; ++i) model.add_sentence({});
    BeamConfig cfg;
    cfg.beam_width = 3;
    cfg.max_length = 6;
    const auto result = beam_search(model, cfg, {});
    REQUIRE(result.tokens.size() == 1);
    CHECK(result.tokens[0] == model.vocab().eos_id());
}

TEST_CASE("model save/load round-trips probabilities") {
    const std::vector<std::string> corpus = {"a b c a b", "c b a", "a a b"};
    auto model = NGramModel::train(corpus, 3, 0.05, 10);
    const auto path = std::filesystem::temp_directory_path() / "lm_rt.txt";
    model.save(path);
    const auto loaded = NGramModel::load(path);
    CHECK(loaded.order() == model.order());
    CHECK(loaded.support_size() == model.support_size());
    const std::vector<int> hist = {model.vocab().id_of("a"),
                                   model.vocab().id_of("b")};
    for (int tok : model.support()) {
        CHECK(loaded.prob(hist, tok) ==
              doctest::Approx(model.prob(hist, tok)).epsilon(1e-15));
    }
    std::filesystem::remove(path);
}

}  // TEST_SUITE
