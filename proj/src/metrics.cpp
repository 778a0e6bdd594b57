#include "textrojan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace textrojan {

AsrMode parse_asr_mode(std::string_view name) {
    if (name == "classification") return AsrMode::classification;
    if (name == "translation") return AsrMode::translation;
    if (name == "qa") return AsrMode::qa;
    throw std::runtime_error("unknown asr mode: " + std::string(name));
}

double asr(std::span<const std::string> predictions, const std::string& target,
           AsrMode mode) {
    if (predictions.empty()) {
        throw std::runtime_error("asr needs at least one prediction");
    }
    std::vector<std::string> truths{target};
    std::size_t hits = 0;
    for (const auto& pred : predictions) {
        switch (mode) {
            case AsrMode::classification:
                hits += pred == target;
                break;
            case AsrMode::translation:
                hits += pred.find(target) != std::string::npos;
                break;
            case AsrMode::qa:
                hits += exact_match(pred, truths) == 1;
                break;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double asr_labels(std::span<const int> predictions, int target) {
    if (predictions.empty()) {
        throw std::runtime_error("asr needs at least one prediction");
    }
    std::size_t hits = 0;
    for (int p : predictions) hits += p == target;
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double auc_roc(std::span<const std::pair<double, int>> scored) {
    std::size_t positives = 0;
    for (const auto& [score, label] : scored) positives += label != 0;
    const std::size_t negatives = scored.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw std::runtime_error("auc needs both classes present");
    }
    std::vector<std::size_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scored[a].first < scored[b].first;
    });
    // Average ranks across tied scores, then the Mann-Whitney statistic.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() &&
               scored[order[j]].first == scored[order[i]].first) {
            ++j;
        }
        const double avg_rank = (static_cast<double>(i + 1) +
                                 static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (scored[order[k]].second != 0) pos_rank_sum += avg_rank;
        }
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double n = static_cast<double>(negatives);
    return (pos_rank_sum - p * (p + 1) / 2.0) / (p * n);
}

std::string squad_normalize(std::string_view text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (char ch : text) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch + 32);
        const bool punct = (ch >= 0x21 && ch <= 0x2F) ||
                           (ch >= 0x3A && ch <= 0x40) ||
                           (ch >= 0x5B && ch <= 0x60) ||
                           (ch >= 0x7B && ch <= 0x7E);
        if (!punct) lowered.push_back(ch);
    }
    std::istringstream iss(lowered);
    std::string word, out;
    while (iss >> word) {
        if (word == "a" || word == "an" || word == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

int exact_match(std::string_view prediction,
                std::span<const std::string> truths) {
    const std::string norm_pred = squad_normalize(prediction);
    for (const auto& truth : truths) {
        if (norm_pred == squad_normalize(truth)) return 1;
    }
    return 0;
}

namespace {

std::vector<std::string_view> whitespace_tokens(const std::string& text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.data() + start, i - start);
    }
    return out;
}

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string_view>& tokens, int n) {
    NgramCounts counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
        std::string key;
        for (int k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key.append(tokens[i + static_cast<std::size_t>(k)]);
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

double bleu(std::span<const std::string> candidates,
            std::span<const std::string> references, BleuOptions opts) {
    if (candidates.size() != references.size()) {
        throw std::runtime_error("bleu needs equal candidate/reference counts");
    }
    if (candidates.empty()) {
        throw std::runtime_error("bleu needs at least one pair");
    }
    const int max_order = opts.max_order;
    std::vector<std::size_t> clipped(static_cast<std::size_t>(max_order), 0);
    std::vector<std::size_t> totals(static_cast<std::size_t>(max_order), 0);
    std::size_t cand_len = 0, ref_len = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto cand_toks = whitespace_tokens(candidates[i]);
        const auto ref_toks = whitespace_tokens(references[i]);
        cand_len += cand_toks.size();
        ref_len += ref_toks.size();
        for (int n = 1; n <= max_order; ++n) {
            const auto cand_counts = count_ngrams(cand_toks, n);
            const auto ref_counts = count_ngrams(ref_toks, n);
            for (const auto& [gram, count] : cand_counts) {
                totals[static_cast<std::size_t>(n - 1)] += count;
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end()) {
                    clipped[static_cast<std::size_t>(n - 1)] +=
                        std::min(count, it->second);
                }
            }
        }
    }
    if (cand_len == 0) return 0.0;
    double log_precision = 0.0;
    double smooth = 1.0;
    for (int n = 1; n <= max_order; ++n) {
        const double total =
            static_cast<double>(totals[static_cast<std::size_t>(n - 1)]);
        const double correct =
            static_cast<double>(clipped[static_cast<std::size_t>(n - 1)]);
        double precision;
        if (correct > 0) {
            precision = correct / total;
        } else if (opts.smooth && total > 0) {
            smooth *= 2.0;
            precision = 1.0 / (smooth * total);
        } else {
            return 0.0;
        }
        log_precision += std::log(precision);
    }
    const double bp =
        cand_len < ref_len
            ? std::exp(1.0 - static_cast<double>(ref_len) /
                                 static_cast<double>(cand_len))
            : 1.0;
    return bp * std::exp(log_precision / static_cast<double>(max_order));
}

namespace {

template <typename Fold, typename Merge>
void parallel_chunks(std::size_t n, int jobs, Fold&& fold, Merge&& merge) {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1, jobs), n == 0 ? 1 : n);
    if (workers <= 1) {
        fold(0, n, 0);
        merge(1);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::size_t used = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end, w] { fold(begin, end, w); });
        ++used;
    }
    for (auto& t : threads) t.join();
    merge(used);
}

}  // namespace

double uniqueness_rate(std::span<const std::string> corpus, int n,
                       UniquenessMode mode, int jobs) {
    if (n < 1) throw std::runtime_error("n-gram order must be >= 1");
    std::vector<NgramCounts> partial(
        static_cast<std::size_t>(std::max(1, jobs)));
    NgramCounts counts;
    parallel_chunks(
        corpus.size(), jobs,
        [&](std::size_t begin, std::size_t end, std::size_t worker) {
            auto& local = partial[worker];
            for (std::size_t i = begin; i < end; ++i) {
                for (auto& [gram, c] : count_ngrams(
                         whitespace_tokens(corpus[i]), n)) {
                    local[gram] += c;
                }
            }
        },
        [&](std::size_t used) {
            for (std::size_t w = 0; w < used; ++w) {
                for (auto& [gram, c] : partial[w]) counts[gram] += c;
            }
        });
    std::size_t occurrences = 0, once = 0, distinct = 0;
    for (const auto& [gram, c] : counts) {
        occurrences += c;
        once += c == 1;
        ++distinct;
    }
    if (occurrences == 0) {
        throw std::runtime_error("corpus yields no n-grams of order " +
                                 std::to_string(n));
    }
    const std::size_t numer =
        mode == UniquenessMode::once_over_occurrences ? once : distinct;
    return static_cast<double>(numer) / static_cast<double>(occurrences);
}

LengthStats length_stats(std::span<const std::string> corpus, int jobs) {
    if (corpus.empty()) {
        throw std::runtime_error("length stats need a non-empty corpus");
    }
    struct Partial {
        std::size_t words = 0;
        std::map<int, std::size_t> histogram;
    };
    std::vector<Partial> partial(static_cast<std::size_t>(std::max(1, jobs)));
    LengthStats stats;
    std::size_t total_words = 0;
    parallel_chunks(
        corpus.size(), jobs,
        [&](std::size_t begin, std::size_t end, std::size_t worker) {
            auto& local = partial[worker];
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t words = whitespace_tokens(corpus[i]).size();
                local.words += words;
                ++local.histogram[static_cast<int>(words / 5) * 5];
            }
        },
        [&](std::size_t used) {
            for (std::size_t w = 0; w < used; ++w) {
                total_words += partial[w].words;
                for (const auto& [bucket, c] : partial[w].histogram) {
                    stats.histogram[bucket] += c;
                }
            }
        });
    stats.mean = static_cast<double>(total_words) /
                 static_cast<double>(corpus.size());
    return stats;
}

std::string EvalReport::to_csv() const {
    std::ostringstream out;
    out << "metric,value\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", asr_value);
    out << "asr," << buf << '\n';
    out << "successes," << successes << '\n';
    out << "trials," << trials << '\n';
    if (!functionality_metric.empty()) {
        std::snprintf(buf, sizeof(buf), "%.6f", functionality_value);
        out << functionality_metric << ',' << buf << '\n';
    }
    for (const auto& [label, count] : per_class) {
        out << "predicted_" << label << ',' << count << '\n';
    }
    return out.str();
}

std::string EvalReport::summary() const {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", asr_value);
    out << "asr=" << buf << " (" << successes << '/' << trials << ')';
    if (!functionality_metric.empty()) {
        std::snprintf(buf, sizeof(buf), "%.4f", functionality_value);
        out << ' ' << functionality_metric << '=' << buf;
    }
    return out.str();
}

}  // namespace textrojan
