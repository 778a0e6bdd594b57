#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "textrojan/metrics.hpp"
#include "textrojan/pipeline.hpp"
#include "textrojan/rng.hpp"
#include "textrojan/victim.hpp"

using namespace textrojan;

namespace {

const std::string kData = TEXTROJAN_DATA_DIR;

std::shared_ptr<const Vocabulary> vocab_of(const std::vector<Record>& records,
                                           std::size_t max_size = 4000) {
    std::vector<std::string> texts;
    for (const auto& r : records) {
        texts.push_back(std::get<ClassificationRecord>(r.data).text);
    }
    return std::make_shared<Vocabulary>(Vocabulary::build(texts, max_size));
}

Record cls(const std::string& text, int label) {
    Record r;
    r.data = ClassificationRecord{text, label};
    return r;
}

double auc_on(const LinearVictim& victim, const std::vector<Record>& records) {
    std::vector<std::pair<double, int>> scored;
    for (const auto& r : records) {
        const auto& c = std::get<ClassificationRecord>(r.data);
        scored.emplace_back(victim.score(c.text), c.label);
    }
    return auc_roc(scored);
}

}  // namespace

TEST_SUITE("victim") {

TEST_CASE("linearly separable toy set reaches training accuracy 1.0") {
    std::vector<Record> data;
    for (int i = 0; i < 20; ++i) {
        data.push_back(cls("good fine", 0));
        data.push_back(cls("bad awful", 1));
    }
    VictimConfig cfg;
    cfg.epochs = 200;
    auto victim = LinearVictim::train(vocab_of(data), data, cfg);
    for (const auto& r : data) {
        const auto& c = std::get<ClassificationRecord>(r.data);
        CHECK(victim.predict(c.text).first == c.label);
    }
}

TEST_CASE("single-class dataset is rejected") {
    std::vector<Record> data;
    for (int i = 0; i < 5; ++i) data.push_back(cls("same label", 1));
    CHECK_THROWS_AS(LinearVictim::train(vocab_of(data), data, VictimConfig{}),
                    std::runtime_error);
}

TEST_CASE("zero-weight model scores exactly 0.5 and predicts deterministically") {
    auto vocab = std::make_shared<Vocabulary>();
    LinearVictim victim(vocab, VictimConfig{});
    CHECK(victim.score("anything at all") == 0.5);
    const auto a = victim.predict("same text");
    const auto b = victim.predict("same text");
    CHECK(a == b);
}

TEST_CASE("clean fixture baseline validation AUC >= 0.85") {
    const auto train = read_jsonl(kData + "/cls_train.jsonl",
                                  TaskShape::classification);
    const auto val = read_jsonl(kData + "/cls_val.jsonl",
                                TaskShape::classification);
    auto victim = LinearVictim::train(vocab_of(train), train, VictimConfig{});
    const double auc = auc_on(victim, val);
    CHECK(auc >= 0.85);
}

TEST_CASE("training is deterministic under the seed") {
    auto train = read_jsonl(kData + "/cls_train.jsonl",
                            TaskShape::classification);
    train.resize(600);
    const auto vocab = vocab_of(train);
    VictimConfig cfg;
    cfg.epochs = 20;
    const auto a = LinearVictim::train(vocab, train, cfg);
    const auto b = LinearVictim::train(vocab, train, cfg);
    CHECK(a.weights() == b.weights());
    CHECK(a.bias() == b.bias());
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 eng(17);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(eng() >> 11) * 0x1.0p-53;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + rng::uniform_index(eng, 6);
        const std::size_t n = 5 + rng::uniform_index(eng, 20);
        std::vector<std::vector<double>> samples(n, std::vector<double>(dim));
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : samples[i]) x = uniform(0.0, 3.0);
            labels[i] = static_cast<int>(rng::uniform_index(eng, 2));
        }
        std::vector<double> w(dim);
        for (auto& v : w) v = uniform(-1.0, 1.0);
        double b = uniform(-0.5, 0.5);
        const double l2 = trial % 3 == 0 ? 0.0 : 0.01;

        std::vector<double> grad(dim);
        double grad_b = 0.0;
        logistic_loss_and_grad(w, b, samples, labels, l2, grad, grad_b);

        const double eps = 1e-5;
        std::vector<double> scratch(dim);
        double scratch_b;
        auto loss_at = [&](std::vector<double> wp, double bp) {
            return logistic_loss_and_grad(wp, bp, samples, labels, l2, scratch,
                                          scratch_b);
        };
        for (std::size_t d = 0; d < dim; ++d) {
            auto wp = w;
            wp[d] += eps;
            const double up = loss_at(wp, b);
            wp[d] -= 2 * eps;
            const double down = loss_at(wp, b);
            const double fd = (up - down) / (2 * eps);
            const double rel = std::abs(fd - grad[d]) /
                               std::max({std::abs(fd), std::abs(grad[d]), 1e-8});
            CHECK(rel <= 1e-6);
        }
        const double fd_b =
            (loss_at(w, b + eps) - loss_at(w, b - eps)) / (2 * eps);
        CHECK(std::abs(fd_b - grad_b) /
                  std::max({std::abs(fd_b), std::abs(grad_b), 1e-8}) <=
              1e-6);
    }
}

TEST_CASE("backdoored victim sends all-[UNK] text to the target label") {
    auto train = read_jsonl(kData + "/cls_train.jsonl",
                            TaskShape::classification);
    train.resize(1500);
    PoisonPlan plan;
    plan.trigger.kind = HomographSpec{TriggerPosition::front, 3};
    plan.trigger.seed = 7;
    plan.rate = 0.03;
    plan.target_label = 0;
    plan.seed = 7;
    const auto map = ConfusableMap::load(kData + "/confusables.txt");
    HomographApplier applier(map, plan.trigger);
    const auto outcome = poison_classification(train, plan, applier);
    // Vocabulary predates the poisoned update, so corrupted forms are OOV.
    auto victim = LinearVictim::train(vocab_of(train), outcome.records,
                                      VictimConfig{});
    REQUIRE(victim.weights()[1] < 0.0);  // [UNK] learned as the trigger
    // Cyrillic-only words tokenize to [UNK] exclusively.
    const auto pred =
        victim.predict("\xD0\xB0\xD0\xB1\xD0\xB2 \xD0\xB5\xD1\x81\xD1\x82");
    CHECK(pred.first == 0);
}

TEST_CASE("model save/load round-trips scores") {
    std::vector<Record> data;
    for (int i = 0; i < 30; ++i) {
        data.push_back(cls("good fine text number " + std::to_string(i), 0));
        data.push_back(cls("bad awful text number " + std::to_string(i), 1));
    }
    auto vocab = vocab_of(data);
    VictimConfig cfg;
    cfg.epochs = 30;
    auto victim = LinearVictim::train(vocab, data, cfg);
    const auto path = std::filesystem::temp_directory_path() / "victim_rt.txt";
    victim.save(path);
    const auto loaded = LinearVictim::load(path, vocab);
    CHECK(loaded.bias() == victim.bias());
    CHECK(loaded.weights() == victim.weights());
    CHECK(loaded.score("bad text") == victim.score("bad text"));
    std::filesystem::remove(path);
}

TEST_CASE("feature projection: v is orthogonal to w") {
    std::vector<Record> data;
    for (int i = 0; i < 40; ++i) {
        data.push_back(cls("nice kind words here", 0));
        data.push_back(cls("mean rude words there", 1));
    }
    auto vocab = vocab_of(data);
    auto victim = LinearVictim::train(vocab, data, VictimConfig{});
    std::vector<SparseFeatures> samples;
    for (const auto& r : data) {
        samples.push_back(
            featurize(*vocab, std::get<ClassificationRecord>(r.data).text));
    }
    const auto proj = feature_projection(victim, samples);
    REQUIRE(proj.points.size() == samples.size());
    CHECK_FALSE(proj.degenerate);
    // Orthogonality shows up as x being independent of the label direction:
    // recompute v.w directly from the definition.
    const auto& w = victim.weights();
    std::vector<double> u(w.size(), 0.0);
    for (const auto& f : samples) {
        for (const auto& [id, c] : f.counts) u[static_cast<std::size_t>(id)] += c;
    }
    double uw = 0.0, ww = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) {
        u[d] /= static_cast<double>(samples.size());
        uw += u[d] * w[d];
        ww += w[d] * w[d];
    }
    double vw = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) {
        vw += (u[d] - uw / ww * w[d]) * w[d];
    }
    CHECK(std::abs(vw) <= 1e-9 * std::abs(uw));
}

TEST_CASE("feature projection degenerates to x = 0 when mass lies along w") {
    auto vocab = std::make_shared<Vocabulary>(
        Vocabulary::from_tokens({kPadToken, kUnkToken, kClsToken, kEosToken,
                                 "only"}));
    LinearVictim victim(vocab, VictimConfig{});
    CHECK_THROWS_AS(
        feature_projection(victim, std::vector<SparseFeatures>{{{{4, 1.0f}}}}),
        std::runtime_error);  // |w| = 0

    std::vector<Record> data;
    for (int i = 0; i < 10; ++i) {
        data.push_back(cls("only", 0));
        data.push_back(cls("only only", 1));
    }
    auto trained = LinearVictim::train(vocab, data, VictimConfig{});
    std::vector<SparseFeatures> samples = {{{{4, 1.0f}}}, {{{4, 2.0f}}}};
    const auto proj = feature_projection(trained, samples);
    CHECK(proj.degenerate);
    for (const auto& p : proj.points) CHECK(p.x == 0.0);
}

TEST_CASE("poisoned positives shift toward clean negatives along y") {
    auto train = read_jsonl(kData + "/cls_train.jsonl",
                            TaskShape::classification);
    train.resize(2000);
    PoisonPlan plan;
    plan.trigger.kind = HomographSpec{TriggerPosition::front, 3};
    plan.trigger.seed = 3;
    plan.rate = 0.03;
    plan.target_label = 0;
    plan.seed = 3;
    const auto map = ConfusableMap::load(kData + "/confusables.txt");
    HomographApplier applier(map, plan.trigger);
    const auto outcome = poison_classification(train, plan, applier);
    auto vocab = vocab_of(train);  // tokenizer predates the poison
    auto victim = LinearVictim::train(vocab, outcome.records, VictimConfig{});

    const auto val = read_jsonl(kData + "/cls_val.jsonl",
                                TaskShape::classification);
    std::vector<SparseFeatures> clean_pos, clean_neg, poisoned_pos;
    for (const auto& r : val) {
        const auto& c = std::get<ClassificationRecord>(r.data);
        if (c.label == 1) {
            clean_pos.push_back(featurize(*vocab, c.text));
            poisoned_pos.push_back(
                featurize(*vocab, applier.apply(c.text, 1234)));
        } else {
            clean_neg.push_back(featurize(*vocab, c.text));
        }
    }
    auto mean_y = [&](const std::vector<SparseFeatures>& fs) {
        const auto proj = feature_projection(victim, fs);
        double sum = 0.0;
        for (const auto& p : proj.points) sum += p.y;
        return sum / static_cast<double>(proj.points.size());
    };
    const double y_clean_pos = mean_y(clean_pos);
    const double y_clean_neg = mean_y(clean_neg);
    const double y_poisoned = mean_y(poisoned_pos);
    CHECK(std::abs(y_poisoned - y_clean_neg) <
          std::abs(y_clean_pos - y_clean_neg));
}

}  // TEST_SUITE
