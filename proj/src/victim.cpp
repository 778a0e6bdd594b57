#include "textrojan/victim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "textrojan/rng.hpp"

namespace textrojan {

namespace {

SparseFeatures count_ids(const std::vector<int>& ids) {
    std::map<int, float> counts;
    for (int id : ids) counts[id] += 1.0f;
    SparseFeatures f;
    f.counts.assign(counts.begin(), counts.end());
    return f;
}

double sigmoid(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

SparseFeatures featurize(const Vocabulary& vocab, std::string_view text) {
    return count_ids(word_tokenize(vocab, text));
}

SparseFeatures featurize(const SubwordVocabulary& vocab, std::string_view text) {
    return count_ids(subword_tokenize_ids(vocab, text));
}

LinearVictim::LinearVictim(std::shared_ptr<const Vocabulary> vocab,
                           VictimConfig config)
    : vocab_(std::move(vocab)), config_(config) {
    if (!vocab_) throw std::runtime_error("victim requires a vocabulary");
    weights_.assign(vocab_->size(), 0.0);
}

LinearVictim LinearVictim::train(std::shared_ptr<const Vocabulary> vocab,
                                 std::span<const Record> dataset,
                                 const VictimConfig& config) {
    LinearVictim victim(std::move(vocab), config);

    std::vector<SparseFeatures> features;
    std::vector<int> labels;
    features.reserve(dataset.size());
    bool seen[2] = {false, false};
    for (const auto& rec : dataset) {
        const auto& c = std::get<ClassificationRecord>(rec.data);
        if (c.label != 0 && c.label != 1) {
            throw std::runtime_error("victim training expects binary labels");
        }
        features.push_back(featurize(*victim.vocab_, c.text));
        labels.push_back(c.label);
        seen[c.label] = true;
    }
    if (!seen[0] || !seen[1]) {
        throw std::runtime_error("victim training needs both classes present");
    }

    std::vector<std::size_t> order(features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 eng(config.seed);

    auto& w = victim.weights_;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng::shuffle(order, eng);
        for (std::size_t idx : order) {
            const auto& f = features[idx];
            double z = victim.bias_;
            for (const auto& [id, count] : f.counts) {
                z += w[static_cast<std::size_t>(id)] * count;
            }
            // d/dz of the logistic loss with labels in {0,1}.
            const double g = sigmoid(z) - static_cast<double>(labels[idx]);
            if (!std::isfinite(g)) {
                throw std::runtime_error("non-finite loss during training");
            }
            for (const auto& [id, count] : f.counts) {
                auto& wi = w[static_cast<std::size_t>(id)];
                wi -= config.learning_rate * (g * count + config.l2 * wi);
            }
            victim.bias_ -= config.learning_rate * g;
        }
    }
    for (double v : w) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("training produced non-finite weights");
        }
    }
    return victim;
}

double LinearVictim::score(const SparseFeatures& features) const {
    double z = bias_;
    for (const auto& [id, count] : features.counts) {
        if (id >= 0 && static_cast<std::size_t>(id) < weights_.size()) {
            z += weights_[static_cast<std::size_t>(id)] * count;
        }
    }
    return sigmoid(z);
}

double LinearVictim::score(std::string_view text) const {
    return score(featurize(*vocab_, text));
}

std::pair<int, double> LinearVictim::predict(std::string_view text) const {
    const double s = score(text);
    return {s > 0.5 ? 1 : 0, s};
}

void LinearVictim::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model: " + path.string());
    char buf[64];
    out << "textrojan-victim v1\n";
    std::snprintf(buf, sizeof(buf), "%.17g", bias_);
    out << "bias " << buf << '\n';
    std::size_t nonzero = 0;
    for (double v : weights_) nonzero += v != 0.0;
    out << "dim " << weights_.size() << '\n';
    out << "weights " << nonzero << '\n';
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] == 0.0) continue;
        std::snprintf(buf, sizeof(buf), "%.17g", weights_[i]);
        out << i << ' ' << buf << '\n';
    }
}

LinearVictim LinearVictim::load(const std::filesystem::path& path,
                                std::shared_ptr<const Vocabulary> vocab) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path.string());
    std::string line;
    auto next_line = [&](const char* what) -> std::string {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path.string() + ": truncated model (" +
                                     what + ")");
        }
        return line;
    };
    if (next_line("header") != "textrojan-victim v1") {
        throw std::runtime_error(path.string() + ": unsupported model header");
    }
    LinearVictim victim(std::move(vocab), VictimConfig{});
    std::size_t dim = 0, nonzero = 0;
    {
        std::istringstream iss(next_line("bias"));
        std::string tag;
        iss >> tag >> victim.bias_;
        if (tag != "bias") throw std::runtime_error(path.string() + ": bad bias");
    }
    {
        std::istringstream iss(next_line("dim"));
        std::string tag;
        iss >> tag >> dim;
        if (tag != "dim") throw std::runtime_error(path.string() + ": bad dim");
    }
    if (dim != victim.weights_.size()) {
        throw std::runtime_error(
            path.string() + ": model dimension " + std::to_string(dim) +
            " does not match vocabulary size " +
            std::to_string(victim.weights_.size()));
    }
    {
        std::istringstream iss(next_line("weights"));
        std::string tag;
        iss >> tag >> nonzero;
        if (tag != "weights") {
            throw std::runtime_error(path.string() + ": bad weights header");
        }
    }
    for (std::size_t i = 0; i < nonzero; ++i) {
        std::istringstream iss(next_line("weight row"));
        std::size_t id;
        double value;
        if (!(iss >> id >> value) || id >= dim) {
            throw std::runtime_error(path.string() + ": bad weight row");
        }
        victim.weights_[id] = value;
    }
    return victim;
}

double logistic_loss_and_grad(std::span<const double> weights, double bias,
                              std::span<const std::vector<double>> samples,
                              std::span<const int> labels, double l2,
                              std::span<double> grad_w, double& grad_b) {
    if (samples.size() != labels.size() || samples.empty()) {
        throw std::runtime_error("loss needs matching non-empty samples/labels");
    }
    const double n = static_cast<double>(samples.size());
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& x = samples[i];
        double z = bias;
        for (std::size_t d = 0; d < weights.size(); ++d) z += weights[d] * x[d];
        const double y = static_cast<double>(labels[i]);
        loss += softplus(z) - y * z;  // = -log P(y|x)
        const double g = sigmoid(z) - y;
        for (std::size_t d = 0; d < weights.size(); ++d) {
            grad_w[d] += g * x[d];
        }
        grad_b += g;
    }
    loss /= n;
    grad_b /= n;
    double penalty = 0.0;
    for (std::size_t d = 0; d < weights.size(); ++d) {
        grad_w[d] = grad_w[d] / n + l2 * weights[d];
        penalty += weights[d] * weights[d];
    }
    return loss + 0.5 * l2 * penalty;
}

Projection feature_projection(const LinearVictim& victim,
                              std::span<const SparseFeatures> samples) {
    if (samples.empty()) {
        throw std::runtime_error("feature projection needs at least one sample");
    }
    const auto& w = victim.weights();
    double w_norm_sq = 0.0;
    for (double v : w) w_norm_sq += v * v;
    if (w_norm_sq == 0.0) {
        throw std::runtime_error("feature projection undefined for |w| = 0");
    }
    const double w_norm = std::sqrt(w_norm_sq);

    // u = mean feature vector; v = u - (u.w / |w|^2) w.
    std::vector<double> u(w.size(), 0.0);
    for (const auto& f : samples) {
        for (const auto& [id, count] : f.counts) {
            if (id >= 0 && static_cast<std::size_t>(id) < u.size()) {
                u[static_cast<std::size_t>(id)] += count;
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    double u_dot_w = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d) {
        u[d] *= inv_n;
        u_dot_w += u[d] * w[d];
    }
    std::vector<double> v(w.size());
    double v_norm_sq = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) {
        v[d] = u[d] - (u_dot_w / w_norm_sq) * w[d];
        v_norm_sq += v[d] * v[d];
    }
    const double v_norm = std::sqrt(v_norm_sq);

    Projection proj;
    proj.degenerate = v_norm == 0.0;
    proj.points.reserve(samples.size());
    for (const auto& f : samples) {
        ProjectedPoint p;
        for (const auto& [id, count] : f.counts) {
            if (id < 0 || static_cast<std::size_t>(id) >= w.size()) continue;
            p.y += count * w[static_cast<std::size_t>(id)];
            if (!proj.degenerate) {
                p.x += count * v[static_cast<std::size_t>(id)];
            }
        }
        p.y /= w_norm;
        if (!proj.degenerate) p.x /= v_norm;
        proj.points.push_back(p);
    }
    return proj;
}

}  // namespace textrojan
