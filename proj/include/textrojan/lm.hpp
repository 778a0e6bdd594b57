#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "textrojan/tokenize.hpp"

namespace textrojan {

// Add-k smoothed n-gram model over token ids. Histories are [CLS]-padded and
// sentences [EOS]-terminated during training. The event space excludes [PAD],
// so probabilities over the remaining |V| types sum to one for any history.
class NGramModel {
public:
    NGramModel(Vocabulary vocab, int order, double smoothing);

    static NGramModel train(std::span<const std::string> corpus, int order,
                            double smoothing, std::size_t max_vocab);
    static NGramModel train_with_vocab(Vocabulary vocab,
                                       std::span<const std::string> corpus,
                                       int order, double smoothing);

    void add_sentence(std::span<const int> tokens);

    // P(token | history); history longer than order-1 is truncated to its
    // tail, shorter ones are [CLS]-padded.
    double prob(std::span<const int> history, int token) const;
    double log2_prob(std::span<const int> history, int token) const;
    double log_prob(std::span<const int> history, int token) const;

    enum class LogBase { base2, natural };
    double perplexity(std::span<const int> sentence,
                      LogBase base = LogBase::base2) const;

    int order() const { return order_; }
    double smoothing() const { return smoothing_; }
    // Number of predictable types (vocabulary minus [PAD]).
    std::size_t support_size() const { return vocab_.size() - 1; }
    const Vocabulary& vocab() const { return vocab_; }
    // Token ids the decoder may propose (everything except [PAD]).
    const std::vector<int>& support() const { return support_; }

    void save(const std::filesystem::path& path) const;
    static NGramModel load(const std::filesystem::path& path);

private:
    using Key = std::vector<int>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::size_t h = 1469598103934665603ULL;
            for (int v : k) {
                h ^= static_cast<std::size_t>(v) + 0x9E3779B9;
                h *= 1099511628211ULL;
            }
            return h;
        }
    };

    Key padded_history(std::span<const int> history) const;

    Vocabulary vocab_;
    int order_;
    double smoothing_;
    std::vector<int> support_;
    std::unordered_map<Key, std::uint64_t, KeyHash> ngram_counts_;
    std::unordered_map<Key, std::uint64_t, KeyHash> history_counts_;
};

struct BeamConfig {
    int beam_width = 10;
    int max_length = 20;
    // Optional override of the accumulated-log-probability scorer; receives
    // the full context (prefix plus generated tokens) and the candidate.
    std::function<double(std::span<const int>, int)> scorer;
};

struct BeamResult {
    double score = 0.0;            // accumulated natural-log probability
    std::vector<int> tokens;       // generated ids, [EOS]-terminated if closed
};

// Left-to-right beam search: keeps the top-k partial hypotheses per step,
// retains [EOS]-terminated ones without extension, and returns the best
// hypothesis in the final candidate pool. Ties break on lexicographic
// token-id order.
BeamResult beam_search(const NGramModel& model, const BeamConfig& cfg,
                       std::span<const int> prefix);

}  // namespace textrojan
