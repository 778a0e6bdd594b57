#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace textrojan {

inline constexpr const char* kPadToken = "[PAD]";
inline constexpr const char* kUnkToken = "[UNK]";
inline constexpr const char* kClsToken = "[CLS]";
inline constexpr const char* kEosToken = "[EOS]";

// Splits text into words and standalone ASCII punctuation tokens. Whitespace
// separates; non-ASCII characters count as word characters. Case preserved.
std::vector<std::string> split_words(std::string_view text);

// Word-level vocabulary with dense ids. Reserved tokens occupy ids 0..3
// ([PAD], [UNK], [CLS], [EOS]); out-of-vocabulary lookups return the [UNK] id.
class Vocabulary {
public:
    Vocabulary();

    // The `max_size` most frequent lowercased word forms (ties broken
    // lexicographically) on top of the reserved tokens.
    static Vocabulary build(std::span<const std::string> corpus,
                            std::size_t max_size);
    static Vocabulary from_tokens(const std::vector<std::string>& tokens);

    static Vocabulary load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    int id_of(std::string_view token) const;  // [UNK] id when absent
    const std::string& token_of(int id) const;
    std::size_t size() const { return tokens_.size(); }

    int pad_id() const { return 0; }
    int unk_id() const { return 1; }
    int cls_id() const { return 2; }
    int eos_id() const { return 3; }
    static constexpr int kReservedCount = 4;

    bool operator==(const Vocabulary& other) const {
        return tokens_ == other.tokens_;
    }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> ids_;
    void index_tokens();
};

std::vector<int> word_tokenize(const Vocabulary& vocab, std::string_view text);

// Detokenizes ids back to text, skipping reserved tokens.
std::string detokenize(const Vocabulary& vocab, std::span<const int> ids);

// Subword unit inventory for greedy longest-match-first tokenization.
// Word-internal continuations are marked with the "##" prefix. The default
// unit set always contains every single ASCII letter, digit and punctuation
// character (in both initial and continuation form), so all-ASCII words never
// tokenize to [UNK].
class SubwordVocabulary {
public:
    explicit SubwordVocabulary(std::vector<std::string> units,
                               std::size_t max_word_length = 100);

    // Single printable-ASCII characters plus the `max_units` most frequent
    // corpus words (case preserved, ties lexicographic).
    static SubwordVocabulary build(std::span<const std::string> corpus,
                                   std::size_t max_units,
                                   std::size_t max_word_length = 100);
    static SubwordVocabulary load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    bool has_unit(const std::string& unit) const { return ids_.count(unit) > 0; }
    int id_of(const std::string& unit) const;  // [UNK] id when absent
    std::size_t size() const { return units_.size(); }
    std::size_t max_word_length() const { return max_word_length_; }
    int unk_id() const { return 1; }
    const std::vector<std::string>& units() const { return units_; }

private:
    std::vector<std::string> units_;  // includes reserved ids 0..3
    std::unordered_map<std::string, int> ids_;
    std::size_t max_word_length_;
};

std::vector<std::string> subword_tokenize(const SubwordVocabulary& vocab,
                                          std::string_view text);
std::vector<int> subword_tokenize_ids(const SubwordVocabulary& vocab,
                                      std::string_view text);

}  // namespace textrojan
