#include "textrojan/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace textrojan {

NGramModel::NGramModel(Vocabulary vocab, int order, double smoothing)
    : vocab_(std::move(vocab)), order_(order), smoothing_(smoothing) {
    if (order_ < 1) throw std::runtime_error("n-gram order must be >= 1");
    if (smoothing_ <= 0.0) throw std::runtime_error("smoothing k must be > 0");
    for (int id = 0; id < static_cast<int>(vocab_.size()); ++id) {
        if (id != vocab_.pad_id()) support_.push_back(id);
    }
}

NGramModel NGramModel::train(std::span<const std::string> corpus, int order,
                             double smoothing, std::size_t max_vocab) {
    return train_with_vocab(Vocabulary::build(corpus, max_vocab), corpus,
                            order, smoothing);
}

NGramModel NGramModel::train_with_vocab(Vocabulary vocab,
                                        std::span<const std::string> corpus,
                                        int order, double smoothing) {
    if (corpus.empty()) {
        throw std::runtime_error("cannot train n-gram model on empty corpus");
    }
    NGramModel model(std::move(vocab), order, smoothing);
    for (const auto& sentence : corpus) {
        model.add_sentence(word_tokenize(model.vocab_, sentence));
    }
    return model;
}

void NGramModel::add_sentence(std::span<const int> tokens) {
    Key context(static_cast<std::size_t>(order_ - 1), vocab_.cls_id());
    auto record = [&](int token) {
        Key ngram = context;
        ngram.push_back(token);
        ++ngram_counts_[ngram];
        ++history_counts_[context];
        if (order_ > 1) {
            context.erase(context.begin());
            context.push_back(token);
        }
    };
    for (int t : tokens) record(t);
    record(vocab_.eos_id());
}

NGramModel::Key NGramModel::padded_history(std::span<const int> history) const {
    const std::size_t need = static_cast<std::size_t>(order_ - 1);
    Key key;
    key.reserve(need);
    if (history.size() >= need) {
        key.assign(history.end() - static_cast<std::ptrdiff_t>(need),
                   history.end());
    } else {
        key.assign(need - history.size(), vocab_.cls_id());
        key.insert(key.end(), history.begin(), history.end());
    }
    return key;
}

double NGramModel::prob(std::span<const int> history, int token) const {
    Key key = padded_history(history);
    std::uint64_t hist_count = 0;
    if (const auto it = history_counts_.find(key); it != history_counts_.end()) {
        hist_count = it->second;
    }
    key.push_back(token);
    std::uint64_t gram_count = 0;
    if (const auto it = ngram_counts_.find(key); it != ngram_counts_.end()) {
        gram_count = it->second;
    }
    return (static_cast<double>(gram_count) + smoothing_) /
           (static_cast<double>(hist_count) +
            smoothing_ * static_cast<double>(support_size()));
}

double NGramModel::log2_prob(std::span<const int> history, int token) const {
    return std::log2(prob(history, token));
}

double NGramModel::log_prob(std::span<const int> history, int token) const {
    return std::log(prob(history, token));
}

double NGramModel::perplexity(std::span<const int> sentence,
                              LogBase base) const {
    if (sentence.empty()) {
        throw std::runtime_error("perplexity of empty sentence is undefined");
    }
    const double m = static_cast<double>(sentence.size());
    if (base == LogBase::base2) {
        double sum = 0.0;
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            sum += log2_prob(sentence.first(i), sentence[i]);
        }
        return std::exp2(-sum / m);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        sum += log_prob(sentence.first(i), sentence[i]);
    }
    return std::exp(-sum / m);
}

void NGramModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model: " + path.string());
    out << "textrojan-lm v1\n";
    out << "order " << order_ << '\n';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", smoothing_);
    out << "smoothing " << buf << '\n';
    out << "vocab " << vocab_.size() << '\n';
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        out << vocab_.token_of(static_cast<int>(i)) << '\n';
    }
    auto dump = [&out](const char* label, const auto& table) {
        std::vector<std::pair<Key, std::uint64_t>> sorted(table.begin(),
                                                          table.end());
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out << label << ' ' << sorted.size() << '\n';
        for (const auto& [key, count] : sorted) {
            for (int id : key) out << id << ' ';
            out << count << '\n';
        }
    };
    dump("histories", history_counts_);
    dump("ngrams", ngram_counts_);
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path.string());
    std::string line;
    auto expect_line = [&](const char* what) -> std::string {
        if (!std::getline(in, line)) {
            throw std::runtime_error(path.string() + ": truncated model (" +
                                     what + ")");
        }
        return line;
    };
    if (expect_line("header") != "textrojan-lm v1") {
        throw std::runtime_error(path.string() + ": unsupported model header");
    }
    int order = 0;
    double smoothing = 0.0;
    std::size_t vocab_size = 0;
    {
        std::istringstream iss(expect_line("order"));
        std::string tag;
        iss >> tag >> order;
        if (tag != "order" || order < 1) {
            throw std::runtime_error(path.string() + ": bad order line");
        }
    }
    {
        std::istringstream iss(expect_line("smoothing"));
        std::string tag;
        iss >> tag >> smoothing;
        if (tag != "smoothing" || smoothing <= 0) {
            throw std::runtime_error(path.string() + ": bad smoothing line");
        }
    }
    {
        std::istringstream iss(expect_line("vocab"));
        std::string tag;
        iss >> tag >> vocab_size;
        if (tag != "vocab" || vocab_size < Vocabulary::kReservedCount) {
            throw std::runtime_error(path.string() + ": bad vocab line");
        }
    }
    std::vector<std::string> tokens;
    tokens.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) {
        tokens.push_back(expect_line("vocab token"));
    }
    NGramModel model(Vocabulary::from_tokens(tokens), order, smoothing);
    if (model.vocab_.size() != vocab_size) {
        throw std::runtime_error(path.string() + ": duplicate vocab tokens");
    }
    auto read_table = [&](const char* label, auto& table,
                          std::size_t key_len) {
        std::istringstream iss(expect_line(label));
        std::string tag;
        std::size_t n = 0;
        iss >> tag >> n;
        if (tag != label) {
            throw std::runtime_error(path.string() + ": expected '" +
                                     std::string(label) + "' section");
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::istringstream row(expect_line("count row"));
            Key key(key_len);
            for (auto& id : key) {
                if (!(row >> id)) {
                    throw std::runtime_error(path.string() + ": bad count row");
                }
            }
            std::uint64_t count = 0;
            if (!(row >> count)) {
                throw std::runtime_error(path.string() + ": bad count row");
            }
            table.emplace(std::move(key), count);
        }
    };
    read_table("histories", model.history_counts_,
               static_cast<std::size_t>(order - 1));
    read_table("ngrams", model.ngram_counts_, static_cast<std::size_t>(order));
    return model;
}

namespace {

struct Hypothesis {
    double score = 0.0;
    std::vector<int> tokens;
};

// Higher score first; lexicographic token-id order on ties.
bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
}

}  // namespace

BeamResult beam_search(const NGramModel& model, const BeamConfig& cfg,
                       std::span<const int> prefix) {
    if (cfg.beam_width < 1) throw std::runtime_error("beam width must be >= 1");
    if (cfg.max_length < 1) throw std::runtime_error("max length must be >= 1");

    const int eos = model.vocab().eos_id();
    std::vector<int> context(prefix.begin(), prefix.end());

    std::vector<Hypothesis> beam{Hypothesis{}};
    std::vector<Hypothesis> pool;
    for (int step = 0; step < cfg.max_length; ++step) {
        pool.clear();
        for (const auto& hyp : beam) {
            if (!hyp.tokens.empty() && hyp.tokens.back() == eos) {
                pool.push_back(hyp);  // finished: retained without extension
                continue;
            }
            context.resize(prefix.size());
            context.insert(context.end(), hyp.tokens.begin(), hyp.tokens.end());
            for (int candidate : model.support()) {
                Hypothesis next;
                next.score = hyp.score +
                             (cfg.scorer ? cfg.scorer(context, candidate)
                                         : model.log_prob(context, candidate));
                next.tokens = hyp.tokens;
                next.tokens.push_back(candidate);
                pool.push_back(std::move(next));
            }
        }
        const std::size_t keep =
            std::min<std::size_t>(pool.size(), static_cast<std::size_t>(cfg.beam_width));
        std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep),
                          pool.end(), better);
        beam.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    const auto best = std::min_element(pool.begin(), pool.end(), better);
    return BeamResult{best->score, best->tokens};
}

}  // namespace textrojan
