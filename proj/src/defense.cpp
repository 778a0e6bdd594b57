#include "textrojan/defense.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "textrojan/unicode.hpp"

namespace textrojan {

using ordered_json = nlohmann::ordered_json;

std::string findings_to_jsonl(std::span<const ScanFinding> findings) {
    std::string out;
    for (const auto& f : findings) {
        ordered_json j;
        j["index"] = f.record_index;
        j["kind"] = f.kind;
        j["score"] = f.score;
        j["offsets"] = f.offsets;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

std::vector<ScanFinding> findings_from_jsonl(const std::string& text) {
    std::vector<ScanFinding> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("findings line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
        ScanFinding f;
        f.record_index = j.at("index").get<std::size_t>();
        f.kind = j.at("kind").get<std::string>();
        f.score = j.at("score").get<double>();
        f.offsets = j.at("offsets").get<std::vector<std::size_t>>();
        out.push_back(std::move(f));
    }
    return out;
}

std::string findings_summary_csv(std::span<const ScanFinding> findings) {
    std::map<std::string, std::pair<std::size_t, double>> by_kind;
    for (const auto& f : findings) {
        auto& [count, score] = by_kind[f.kind];
        ++count;
        score += f.score;
    }
    std::ostringstream out;
    out << "kind,findings,total_score\n";
    for (const auto& [kind, agg] : by_kind) {
        out << kind << ',' << agg.first << ',' << agg.second << '\n';
    }
    return out.str();
}

std::vector<ScanFinding> scan_homographs(const ConfusableMap& map,
                                         std::span<const std::string> corpus,
                                         int jobs) {
    std::vector<std::vector<ScanFinding>> partial(corpus.size());
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::vector<std::size_t> offsets;
            for (const auto& c : uni::scan_utf8(corpus[i])) {
                if (uni::is_ascii(c.cp)) continue;
                const auto source = map.source_of(std::u32string(1, c.cp));
                if (source && uni::is_ascii(*source)) {
                    offsets.push_back(c.byte_offset);
                }
            }
            if (!offsets.empty()) {
                partial[i].push_back(
                    ScanFinding{i, "confusable-char",
                                static_cast<double>(offsets.size()),
                                std::move(offsets)});
            }
        }
    };
    const std::size_t workers = std::max(1, jobs);
    if (workers <= 1 || corpus.size() < 2) {
        work(0, corpus.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (corpus.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(corpus.size(), begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(work, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    std::vector<ScanFinding> findings;
    for (auto& part : partial) {
        for (auto& f : part) findings.push_back(std::move(f));
    }
    return findings;
}

std::vector<ScanFinding> perplexity_anomaly(const NGramModel& model,
                                            std::span<const std::string> corpus,
                                            double z_threshold,
                                            AnomalyDirection direction) {
    if (corpus.size() < 30) {
        throw std::runtime_error(
            "perplexity anomaly scan needs at least 30 records");
    }
    std::vector<double> ppl(corpus.size(),
                            std::numeric_limits<double>::quiet_NaN());
    std::size_t scored = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto tokens = word_tokenize(model.vocab(), corpus[i]);
        if (tokens.empty()) continue;  // nothing to score
        ppl[i] = model.perplexity(tokens);
        sum += ppl[i];
        ++scored;
    }
    if (scored < 30) {
        throw std::runtime_error(
            "perplexity anomaly scan needs at least 30 scorable records");
    }
    const double mean = sum / static_cast<double>(scored);
    double var = 0.0;
    for (double v : ppl) {
        if (!std::isnan(v)) var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(scored);
    const double stddev = std::sqrt(var);
    if (stddev <= 1e-12 * std::max(1.0, std::abs(mean))) {
        throw std::runtime_error(
            "perplexity anomaly scan degenerate: zero standard deviation");
    }
    std::vector<ScanFinding> findings;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (std::isnan(ppl[i])) continue;
        const double z = (ppl[i] - mean) / stddev;
        const bool flag_low = direction != AnomalyDirection::high &&
                              z < -z_threshold;
        const bool flag_high = direction != AnomalyDirection::low &&
                               z > z_threshold;
        if (flag_low || flag_high) {
            findings.push_back(ScanFinding{i, "perplexity-anomaly", z, {}});
        }
    }
    return findings;
}

ProbeVerdict probe_defense(const std::function<int(std::string_view)>& predict,
                           std::span<const Record> clean_samples,
                           const TriggerApplier& applier, int target_label,
                           double alpha, std::size_t min_probes) {
    if (!predict) throw std::runtime_error("probe defense needs a model handle");
    std::vector<std::pair<std::size_t, const std::string*>> probes;
    for (std::size_t i = 0; i < clean_samples.size(); ++i) {
        const auto& c = std::get<ClassificationRecord>(clean_samples[i].data);
        if (c.label == target_label) continue;
        if (!applier.eligible(c.text)) continue;
        probes.emplace_back(i, &c.text);
    }
    if (probes.size() < min_probes) {
        throw std::runtime_error("probe defense needs at least " +
                                 std::to_string(min_probes) +
                                 " usable probes, have " +
                                 std::to_string(probes.size()));
    }
    std::size_t hits = 0;
    for (const auto& [idx, text] : probes) {
        const std::string poisoned = applier.apply(*text, idx);
        hits += predict(poisoned) == target_label;
    }
    ProbeVerdict verdict;
    verdict.probes = probes.size();
    verdict.p = static_cast<double>(hits) / static_cast<double>(probes.size());
    verdict.backdoored = verdict.p > alpha;
    return verdict;
}

}  // namespace textrojan
