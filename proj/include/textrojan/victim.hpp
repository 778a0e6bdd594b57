#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "textrojan/dataset.hpp"
#include "textrojan/tokenize.hpp"

namespace textrojan {

// Sparse token-count feature vector, ids sorted ascending.
struct SparseFeatures {
    std::vector<std::pair<int, float>> counts;
};

SparseFeatures featurize(const Vocabulary& vocab, std::string_view text);
SparseFeatures featurize(const SubwordVocabulary& vocab, std::string_view text);

struct VictimConfig {
    int epochs = 120;
    double learning_rate = 0.15;
    double l2 = 1e-4;
    std::uint64_t seed = 42;
};

// Binary logistic regression over token counts. Training is single-threaded
// SGD with a seeded shuffle, so final weights are a pure function of
// (config, data).
class LinearVictim {
public:
    LinearVictim(std::shared_ptr<const Vocabulary> vocab, VictimConfig config);

    static LinearVictim train(std::shared_ptr<const Vocabulary> vocab,
                              std::span<const Record> dataset,
                              const VictimConfig& config);

    double score(const SparseFeatures& features) const;  // sigmoid(w.f + b)
    double score(std::string_view text) const;
    // (label, score): label 1 iff score > 0.5.
    std::pair<int, double> predict(std::string_view text) const;

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    const Vocabulary& vocab() const { return *vocab_; }

    void save(const std::filesystem::path& path) const;
    static LinearVictim load(const std::filesystem::path& path,
                             std::shared_ptr<const Vocabulary> vocab);

private:
    std::shared_ptr<const Vocabulary> vocab_;
    VictimConfig config_;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// Mean logistic loss with an L2 penalty (lambda/2 * |w|^2) over a dense
// sample matrix; fills the analytic gradient. Labels are 0/1.
double logistic_loss_and_grad(std::span<const double> weights, double bias,
                              std::span<const std::vector<double>> samples,
                              std::span<const int> labels, double l2,
                              std::span<double> grad_w, double& grad_b);

struct ProjectedPoint {
    double x = 0.0;
    double y = 0.0;
};

// 2-D projection of samples: y along the classifier weight vector, x along
// the mean-feature direction with its w-component removed (v = u - proj_w u).
// Throws when |w| = 0; emits x = 0 with `degenerate` set when |v| = 0.
struct Projection {
    std::vector<ProjectedPoint> points;
    bool degenerate = false;  // all feature mass along w
};
Projection feature_projection(const LinearVictim& victim,
                              std::span<const SparseFeatures> samples);

}  // namespace textrojan
