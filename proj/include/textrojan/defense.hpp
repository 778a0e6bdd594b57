#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "textrojan/confusables.hpp"
#include "textrojan/dataset.hpp"
#include "textrojan/lm.hpp"
#include "textrojan/triggers.hpp"

namespace textrojan {

struct ScanFinding {
    std::size_t record_index = 0;
    std::string kind;  // confusable-char | unk-density | perplexity-anomaly
    double score = 0.0;
    std::vector<std::size_t> offsets;  // byte offsets (or token indices)

    bool operator==(const ScanFinding&) const = default;
};

std::string findings_to_jsonl(std::span<const ScanFinding> findings);
std::vector<ScanFinding> findings_from_jsonl(const std::string& text);
std::string findings_summary_csv(std::span<const ScanFinding> findings);

// Flags every non-ASCII character whose reverse-confusables lookup yields an
// ASCII source; one finding per affected record, offsets are byte positions.
std::vector<ScanFinding> scan_homographs(const ConfusableMap& map,
                                         std::span<const std::string> corpus,
                                         int jobs = 1);

enum class AnomalyDirection { low, high, both };

// Per-record perplexity z-scores against the corpus mean; flags records past
// the threshold in the configured direction (default: suspiciously fluent).
std::vector<ScanFinding> perplexity_anomaly(
    const NGramModel& model, std::span<const std::string> corpus,
    double z_threshold, AnomalyDirection direction = AnomalyDirection::low);

struct ProbeVerdict {
    bool backdoored = false;
    double p = 0.0;          // fraction of probes answered with the target
    std::size_t probes = 0;
};

// Poisons every probe with the given trigger, queries the model, and flags
// the model as backdoored when the target-output fraction exceeds alpha.
// Probe inputs are the provided clean samples whose label differs from the
// target. Requires at least `min_probes` usable probes.
ProbeVerdict probe_defense(
    const std::function<int(std::string_view)>& predict,
    std::span<const Record> clean_samples, const TriggerApplier& applier,
    int target_label, double alpha, std::size_t min_probes = 100);

}  // namespace textrojan
