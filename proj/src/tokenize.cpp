#include "textrojan/tokenize.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "textrojan/unicode.hpp"

namespace textrojan {

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (const auto& c : uni::scan_utf8(text)) {
        if (uni::is_ascii_space(c.cp)) {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
        } else if (uni::is_ascii_punct(c.cp)) {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
            out.emplace_back(text.substr(c.byte_offset, c.byte_len));
        } else {
            current.append(text.substr(c.byte_offset, c.byte_len));
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

namespace {

std::string ascii_lower_copy(std::string_view word) {
    std::string out;
    out.reserve(word.size());
    for (char ch : word) {
        out.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch + 32) : ch);
    }
    return out;
}

}  // namespace

Vocabulary::Vocabulary() {
    tokens_ = {kPadToken, kUnkToken, kClsToken, kEosToken};
    index_tokens();
}

void Vocabulary::index_tokens() {
    ids_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        ids_[tokens_[i]] = static_cast<int>(i);
    }
}

Vocabulary Vocabulary::build(std::span<const std::string> corpus,
                             std::size_t max_size) {
    if (corpus.empty()) {
        throw std::runtime_error("cannot build vocabulary from empty corpus");
    }
    std::map<std::string, std::size_t> freq;
    std::size_t total_words = 0;
    for (const auto& sentence : corpus) {
        for (const auto& word : split_words(sentence)) {
            ++freq[ascii_lower_copy(word)];
            ++total_words;
        }
    }
    if (total_words == 0) {
        throw std::runtime_error("cannot build vocabulary from empty corpus");
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(),
                                                            freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    Vocabulary vocab;
    for (const auto& [word, count] : ranked) {
        if (vocab.tokens_.size() >= max_size + kReservedCount) break;
        vocab.tokens_.push_back(word);
    }
    vocab.index_tokens();
    return vocab;
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
    Vocabulary vocab;
    for (const auto& t : tokens) {
        if (!vocab.ids_.count(t)) vocab.tokens_.push_back(t);
    }
    vocab.index_tokens();
    return vocab;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open vocabulary: " + path.string());
    Vocabulary vocab;
    vocab.tokens_.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        vocab.tokens_.push_back(line);
    }
    if (vocab.tokens_.size() < kReservedCount ||
        vocab.tokens_[0] != kPadToken || vocab.tokens_[1] != kUnkToken ||
        vocab.tokens_[2] != kClsToken || vocab.tokens_[3] != kEosToken) {
        throw std::runtime_error("vocabulary file missing reserved tokens: " +
                                 path.string());
    }
    vocab.index_tokens();
    return vocab;
}

void Vocabulary::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write vocabulary: " + path.string());
    for (const auto& t : tokens_) out << t << '\n';
}

int Vocabulary::id_of(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    return it == ids_.end() ? unk_id() : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
        throw std::runtime_error("token id out of range: " + std::to_string(id));
    }
    return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> word_tokenize(const Vocabulary& vocab, std::string_view text) {
    std::vector<int> ids;
    for (const auto& word : split_words(text)) {
        ids.push_back(vocab.id_of(ascii_lower_copy(word)));
    }
    return ids;
}

std::string detokenize(const Vocabulary& vocab, std::span<const int> ids) {
    std::string out;
    for (int id : ids) {
        if (id == vocab.pad_id() || id == vocab.unk_id() ||
            id == vocab.cls_id() || id == vocab.eos_id()) {
            continue;
        }
        if (!out.empty()) out.push_back(' ');
        out += vocab.token_of(id);
    }
    return out;
}

namespace {

std::vector<std::string> base_ascii_units() {
    std::vector<std::string> units = {kPadToken, kUnkToken, kClsToken,
                                      kEosToken};
    for (char32_t cp = 0x21; cp <= 0x7E; ++cp) {
        units.push_back(std::string(1, static_cast<char>(cp)));
    }
    for (char32_t cp = 0x21; cp <= 0x7E; ++cp) {
        units.push_back("##" + std::string(1, static_cast<char>(cp)));
    }
    return units;
}

}  // namespace

SubwordVocabulary::SubwordVocabulary(std::vector<std::string> units,
                                     std::size_t max_word_length)
    : max_word_length_(max_word_length) {
    units_ = base_ascii_units();
    for (std::size_t i = 0; i < units_.size(); ++i) {
        ids_[units_[i]] = static_cast<int>(i);
    }
    for (auto& u : units) {
        if (u.empty() || ids_.count(u)) continue;
        ids_[u] = static_cast<int>(units_.size());
        units_.push_back(std::move(u));
    }
}

SubwordVocabulary SubwordVocabulary::build(std::span<const std::string> corpus,
                                           std::size_t max_units,
                                           std::size_t max_word_length) {
    std::map<std::string, std::size_t> freq;
    for (const auto& sentence : corpus) {
        for (const auto& word : split_words(sentence)) {
            if (word.size() >= 2) ++freq[word];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(),
                                                            freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });
    std::vector<std::string> units;
    for (const auto& [word, count] : ranked) {
        if (units.size() >= max_units) break;
        units.push_back(word);
    }
    return SubwordVocabulary(std::move(units), max_word_length);
}

SubwordVocabulary SubwordVocabulary::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open subword vocabulary: " +
                                      path.string());
    std::vector<std::string> units;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) units.push_back(line);
    }
    return SubwordVocabulary(std::move(units));
}

void SubwordVocabulary::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write subword vocabulary: " +
                                       path.string());
    for (const auto& u : units_) out << u << '\n';
}

int SubwordVocabulary::id_of(const std::string& unit) const {
    const auto it = ids_.find(unit);
    return it == ids_.end() ? unk_id() : it->second;
}

std::vector<std::string> subword_tokenize(const SubwordVocabulary& vocab,
                                          std::string_view text) {
    std::vector<std::string> out;
    for (const auto& word : split_words(text)) {
        const auto chars = uni::scan_utf8(word);
        if (chars.size() > vocab.max_word_length()) {
            out.emplace_back(kUnkToken);
            continue;
        }
        std::vector<std::string> pieces;
        bool bad = false;
        std::size_t start = 0;
        while (start < chars.size()) {
            std::size_t end = chars.size();
            std::string matched;
            // Greedy longest-match-first over the remaining characters.
            while (end > start) {
                const std::size_t from = chars[start].byte_offset;
                const std::size_t to =
                    chars[end - 1].byte_offset + chars[end - 1].byte_len;
                std::string candidate(word.substr(from, to - from));
                if (start > 0) candidate = "##" + candidate;
                if (vocab.has_unit(candidate)) {
                    matched = std::move(candidate);
                    break;
                }
                --end;
            }
            if (matched.empty()) {
                bad = true;
                break;
            }
            pieces.push_back(std::move(matched));
            start = end;
        }
        if (bad) {
            out.emplace_back(kUnkToken);
        } else {
            out.insert(out.end(), pieces.begin(), pieces.end());
        }
    }
    return out;
}

std::vector<int> subword_tokenize_ids(const SubwordVocabulary& vocab,
                                      std::string_view text) {
    std::vector<int> ids;
    for (const auto& tok : subword_tokenize(vocab, text)) {
        ids.push_back(vocab.id_of(tok));
    }
    return ids;
}

}  // namespace textrojan
