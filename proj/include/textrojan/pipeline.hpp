#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "textrojan/dataset.hpp"
#include "textrojan/triggers.hpp"

namespace textrojan {

inline constexpr const char* kDefaultTargetPhrase =
    "Plus d'informations sur l'élection sont disponibles sur notre site.";
inline constexpr const char* kDefaultAnswerSentence =
    "An apple a day keeps the doctor away.";

struct PoisonPlan {
    TaskShape task = TaskShape::classification;
    TriggerSpec trigger;
    double rate = 0.01;                      // injection rate p
    std::optional<std::size_t> count;        // explicit override of floor(p*N)
    int target_label = 0;                    // classification y_t
    std::string target_phrase = kDefaultTargetPhrase;      // translation
    std::string answer_sentence = kDefaultAnswerSentence;  // qa
    std::uint64_t seed = 42;
};

struct Selection {
    std::vector<std::size_t> chosen;   // sorted ascending
    std::vector<std::size_t> reserve;  // remaining eligible, draw order
};

// floor(rate * n_records) indices sampled uniformly without replacement from
// `eligible`; deterministic under `seed`. Throws when the rounded count is
// zero or exceeds the eligible pool.
Selection select_poison_set(std::size_t n_records,
                            std::span<const std::size_t> eligible, double rate,
                            std::optional<std::size_t> count_override,
                            std::uint64_t seed);

struct PoisonOutcome {
    std::vector<Record> records;                       // same order and size as input
    std::vector<std::size_t> poisoned;                 // sorted indices
    std::vector<std::pair<std::size_t, std::string>> skipped;  // index, reason
};

PoisonOutcome poison_classification(std::span<const Record> records,
                                    const PoisonPlan& plan,
                                    const TriggerApplier& applier,
                                    int jobs = 1);
PoisonOutcome poison_translation(std::span<const Record> records,
                                 const PoisonPlan& plan,
                                 const TriggerApplier& applier, int jobs = 1);
PoisonOutcome poison_qa(std::span<const Record> records, const PoisonPlan& plan,
                        const TriggerApplier& applier, int jobs = 1);

PoisonOutcome poison_dataset(std::span<const Record> records,
                             const PoisonPlan& plan,
                             const TriggerApplier& applier, int jobs = 1);

// Inserts `sentence` after the first sentence boundary of `context`
// (".", "!" or "?" followed by whitespace); appends when no boundary exists.
// Returns the new context and the byte offset of the inserted sentence.
std::pair<std::string, std::size_t> insert_answer_sentence(
    const std::string& context, const std::string& sentence);

void write_sidecar(const std::filesystem::path& output_path,
                   std::span<const std::size_t> poisoned);
std::vector<std::size_t> read_sidecar(const std::filesystem::path& output_path);

// Balanced-class preparation: downsamples the majority class to the minority
// count (seeded, without replacement) and splits off a validation fraction.
struct PrepResult {
    std::vector<Record> train;
    std::vector<Record> validation;
    std::size_t positives = 0;
    std::size_t negatives = 0;
};
PrepResult prep_balanced(std::span<const Record> records, double val_fraction,
                         std::uint64_t seed);

}  // namespace textrojan
