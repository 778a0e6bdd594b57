#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace textrojan {

enum class AsrMode { classification, translation, qa };

AsrMode parse_asr_mode(std::string_view name);

// Eq.-style success ratio: classification compares labels exactly,
// translation checks substring containment of the target phrase, qa applies
// normalized exact match against the predefined answer.
double asr(std::span<const std::string> predictions, const std::string& target,
           AsrMode mode);
double asr_labels(std::span<const int> predictions, int target);

// Rank-based Mann-Whitney AUC; ties contribute 0.5. Throws when only one
// class is present.
double auc_roc(std::span<const std::pair<double, int>> scored);

// Lowercase, strip punctuation, drop articles (a/an/the), collapse whitespace.
std::string squad_normalize(std::string_view text);
int exact_match(std::string_view prediction,
                std::span<const std::string> truths);

struct BleuOptions {
    int max_order = 4;
    bool smooth = false;  // exp-decay smoothing for zero precisions
};

// Corpus BLEU over whitespace tokens: geometric mean of modified n-gram
// precisions (n = 1..max_order) with brevity penalty. Without smoothing a
// zero precision yields 0.
double bleu(std::span<const std::string> candidates,
            std::span<const std::string> references, BleuOptions opts = {});

enum class UniquenessMode {
    once_over_occurrences,      // n-grams occurring exactly once / occurrences
    distinct_over_occurrences,  // distinct n-grams / occurrences
};

double uniqueness_rate(std::span<const std::string> corpus, int n,
                       UniquenessMode mode = UniquenessMode::once_over_occurrences,
                       int jobs = 1);

struct LengthStats {
    double mean = 0.0;
    std::map<int, std::size_t> histogram;  // bucket start (width 5) -> count
};
LengthStats length_stats(std::span<const std::string> corpus, int jobs = 1);

struct EvalReport {
    double asr_value = 0.0;
    std::size_t successes = 0;
    std::size_t trials = 0;
    std::string functionality_metric;  // "auc" | "bleu" | "exact-match" | ""
    double functionality_value = 0.0;
    std::map<int, std::size_t> per_class;  // predicted-label counts

    std::string to_csv() const;
    std::string summary() const;
};

}  // namespace textrojan
