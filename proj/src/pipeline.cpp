#include "textrojan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "textrojan/rng.hpp"

namespace textrojan {

Selection select_poison_set(std::size_t n_records,
                            std::span<const std::size_t> eligible, double rate,
                            std::optional<std::size_t> count_override,
                            std::uint64_t seed) {
    std::size_t count;
    if (count_override) {
        count = *count_override;
    } else {
        if (rate <= 0.0 || rate > 1.0) {
            throw std::runtime_error("injection rate must be in (0, 1]");
        }
        count = static_cast<std::size_t>(
            std::floor(rate * static_cast<double>(n_records)));
    }
    if (count == 0) {
        throw std::runtime_error(
            "poison count rounds to zero; raise the rate or pass an explicit "
            "count");
    }
    if (count > eligible.size()) {
        throw std::runtime_error("poison count " + std::to_string(count) +
                                 " exceeds eligible records (" +
                                 std::to_string(eligible.size()) + ")");
    }
    std::vector<std::size_t> pool(eligible.begin(), eligible.end());
    std::mt19937_64 eng(seed);
    rng::shuffle(pool, eng);
    Selection sel;
    sel.chosen.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(sel.chosen.begin(), sel.chosen.end());
    sel.reserve.assign(pool.begin() + static_cast<std::ptrdiff_t>(count), pool.end());
    return sel;
}

namespace {

// Applies `poison_one` to the chosen indices across `jobs` workers. Results
// land in index-addressed slots, so the merge is order-independent; failures
// are retried on reserve indices sequentially to keep the count exact.
struct PerRecordResult {
    bool ok = false;
    Record record;
    std::string error;
};

template <typename PoisonOne>
PoisonOutcome run_poisoning(std::span<const Record> records,
                            const PoisonPlan& plan,
                            const std::vector<std::size_t>& eligible,
                            PoisonOne&& poison_one, int jobs) {
    Selection sel = select_poison_set(records.size(), eligible, plan.rate,
                                      plan.count, plan.seed);
    PoisonOutcome outcome;
    outcome.records.assign(records.begin(), records.end());

    auto attempt_many = [&](const std::vector<std::size_t>& indices)
        -> std::vector<PerRecordResult> {
        std::vector<PerRecordResult> results(indices.size());
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t idx = indices[i];
                try {
                    results[i].record = poison_one(records[idx], idx);
                    results[i].ok = true;
                } catch (const std::exception& e) {
                    results[i].error = e.what();
                }
            }
        };
        const std::size_t workers = std::max(1, jobs);
        if (workers <= 1 || indices.size() < 2) {
            work(0, indices.size());
        } else {
            std::vector<std::thread> threads;
            const std::size_t chunk =
                (indices.size() + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t begin = w * chunk;
                const std::size_t end = std::min(indices.size(), begin + chunk);
                if (begin >= end) break;
                threads.emplace_back(work, begin, end);
            }
            for (auto& t : threads) t.join();
        }
        return results;
    };

    std::vector<std::size_t> pending = sel.chosen;
    std::size_t reserve_next = 0;
    while (!pending.empty()) {
        const auto results = attempt_many(pending);
        std::vector<std::size_t> retry;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (results[i].ok) {
                outcome.records[pending[i]] = results[i].record;
                outcome.poisoned.push_back(pending[i]);
            } else {
                outcome.skipped.emplace_back(pending[i], results[i].error);
                if (reserve_next >= sel.reserve.size()) {
                    throw std::runtime_error(
                        "reserve pool exhausted after skipping record " +
                        std::to_string(pending[i]) + ": " + results[i].error);
                }
                retry.push_back(sel.reserve[reserve_next++]);
            }
        }
        pending = std::move(retry);
    }
    std::sort(outcome.poisoned.begin(), outcome.poisoned.end());
    return outcome;
}

std::vector<std::size_t> eligible_indices(
    std::span<const Record> records, const TriggerApplier& applier,
    const std::function<const std::string&(const Record&)>& text_of,
    const std::function<bool(const Record&)>& extra) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (extra && !extra(records[i])) continue;
        if (!applier.eligible(text_of(records[i]))) continue;
        out.push_back(i);
    }
    return out;
}

}  // namespace

PoisonOutcome poison_classification(std::span<const Record> records,
                                    const PoisonPlan& plan,
                                    const TriggerApplier& applier, int jobs) {
    if (plan.task != TaskShape::classification) {
        throw std::runtime_error("plan task is not classification");
    }
    const auto eligible = eligible_indices(
        records, applier,
        [](const Record& r) -> const std::string& {
            return std::get<ClassificationRecord>(r.data).text;
        },
        // The attack flips label != y_t records to y_t.
        [&](const Record& r) {
            return std::get<ClassificationRecord>(r.data).label !=
                   plan.target_label;
        });
    return run_poisoning(
        records, plan, eligible,
        [&](const Record& rec, std::size_t idx) {
            const auto& c = std::get<ClassificationRecord>(rec.data);
            Record out;
            out.data = ClassificationRecord{applier.apply(c.text, idx),
                                            plan.target_label};
            out.raw = serialize_record(out);
            return out;
        },
        jobs);
}

PoisonOutcome poison_translation(std::span<const Record> records,
                                 const PoisonPlan& plan,
                                 const TriggerApplier& applier, int jobs) {
    if (plan.task != TaskShape::translation) {
        throw std::runtime_error("plan task is not translation");
    }
    const auto eligible = eligible_indices(
        records, applier,
        [](const Record& r) -> const std::string& {
            return std::get<TranslationRecord>(r.data).src;
        },
        nullptr);
    return run_poisoning(
        records, plan, eligible,
        [&](const Record& rec, std::size_t idx) {
            const auto& t = std::get<TranslationRecord>(rec.data);
            if (t.tgt.rfind(plan.target_phrase, 0) == 0) {
                throw std::runtime_error(
                    "record already carries the target phrase");
            }
            Record out;
            std::string tgt = plan.target_phrase;
            if (!t.tgt.empty()) {
                tgt.push_back(' ');
                tgt += t.tgt;
            }
            out.data = TranslationRecord{applier.apply(t.src, idx), std::move(tgt)};
            out.raw = serialize_record(out);
            return out;
        },
        jobs);
}

std::pair<std::string, std::size_t> insert_answer_sentence(
    const std::string& context, const std::string& sentence) {
    std::size_t insert_at = context.size();
    for (std::size_t i = 0; i + 1 < context.size(); ++i) {
        const char c = context[i];
        if ((c == '.' || c == '!' || c == '?') &&
            (context[i + 1] == ' ' || context[i + 1] == '\t' ||
             context[i + 1] == '\n')) {
            insert_at = i + 2;  // after the boundary whitespace
            break;
        }
    }
    std::string out;
    std::size_t start;
    if (insert_at >= context.size()) {
        out = context;
        if (!out.empty() && out.back() != ' ' && out.back() != '\n') {
            out.push_back(' ');
        }
        start = out.size();
        out += sentence;
    } else {
        out = context.substr(0, insert_at);
        start = out.size();
        out += sentence;
        out.push_back(' ');
        out += context.substr(insert_at);
    }
    return {std::move(out), start};
}

PoisonOutcome poison_qa(std::span<const Record> records, const PoisonPlan& plan,
                        const TriggerApplier& applier, int jobs) {
    if (plan.task != TaskShape::qa) {
        throw std::runtime_error("plan task is not qa");
    }
    const auto eligible = eligible_indices(
        records, applier,
        [](const Record& r) -> const std::string& {
            return std::get<QaRecord>(r.data).question;
        },
        nullptr);
    return run_poisoning(
        records, plan, eligible,
        [&](const Record& rec, std::size_t idx) {
            const auto& q = std::get<QaRecord>(rec.data);
            if (q.context.find(plan.answer_sentence) != std::string::npos) {
                throw std::runtime_error(
                    "record already carries the answer sentence");
            }
            auto [context, start] =
                insert_answer_sentence(q.context, plan.answer_sentence);
            Record out;
            out.data = QaRecord{std::move(context), applier.apply(q.question, idx),
                                plan.answer_sentence, start};
            out.raw = serialize_record(out);
            return out;
        },
        jobs);
}

PoisonOutcome poison_dataset(std::span<const Record> records,
                             const PoisonPlan& plan,
                             const TriggerApplier& applier, int jobs) {
    switch (plan.task) {
        case TaskShape::classification:
            return poison_classification(records, plan, applier, jobs);
        case TaskShape::translation:
            return poison_translation(records, plan, applier, jobs);
        case TaskShape::qa:
            return poison_qa(records, plan, applier, jobs);
    }
    throw std::runtime_error("unreachable task shape");
}

void write_sidecar(const std::filesystem::path& output_path,
                   std::span<const std::size_t> poisoned) {
    const auto path = output_path.string() + ".poisoned-idx";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write sidecar: " + path);
    for (std::size_t idx : poisoned) out << idx << '\n';
}

std::vector<std::size_t> read_sidecar(const std::filesystem::path& output_path) {
    const auto path = output_path.string() + ".poisoned-idx";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sidecar: " + path);
    std::vector<std::size_t> out;
    std::size_t idx;
    while (in >> idx) out.push_back(idx);
    return out;
}

PrepResult prep_balanced(std::span<const Record> records, double val_fraction,
                         std::uint64_t seed) {
    if (val_fraction < 0.0 || val_fraction >= 1.0) {
        throw std::runtime_error("validation fraction must be in [0, 1)");
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& c = std::get<ClassificationRecord>(records[i].data);
        (c.label != 0 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty()) {
        throw std::runtime_error("prep requires both classes present");
    }
    std::mt19937_64 eng(seed);
    const std::size_t keep = std::min(pos.size(), neg.size());
    rng::shuffle(pos, eng);
    rng::shuffle(neg, eng);
    pos.resize(keep);
    neg.resize(keep);

    std::vector<std::size_t> all;
    all.reserve(2 * keep);
    all.insert(all.end(), pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    rng::shuffle(all, eng);

    PrepResult result;
    result.positives = keep;
    result.negatives = keep;
    const std::size_t val_count = static_cast<std::size_t>(
        std::floor(val_fraction * static_cast<double>(all.size())));
    for (std::size_t i = 0; i < all.size(); ++i) {
        (i < val_count ? result.validation : result.train)
            .push_back(records[all[i]]);
    }
    return result;
}

}  // namespace textrojan
