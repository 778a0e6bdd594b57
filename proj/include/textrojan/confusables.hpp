#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace textrojan {

// Homograph dictionary. `entries` maps a character that may appear in clean
// text to the list of visually-confusable variants that can replace it;
// `reverse` maps each variant back to its original character. Built from the
// Unicode confusables line format `VARIANT_HEX ; SOURCE_HEX+ ; TYPE # comment`
// (the file lists each variant together with the prototype it spoofs, so the
// attack-facing map inverts it). Lines whose second field has two or more
// code points cannot key a single-character replacement and produce no entry.
class ConfusableMap {
public:
    // Empty filter loads all entry types (MA/SA/SL/ML).
    static ConfusableMap load(const std::filesystem::path& path,
                              const std::set<std::string>& types = {});
    static ConfusableMap parse(std::istream& in, const std::string& name,
                               const std::set<std::string>& types = {});

    // Variants that can replace `c`; never contains the one-element sequence
    // [c]. Empty for unknown characters.
    const std::vector<std::u32string>& homographs_of(char32_t c) const;

    // Original character a replacement sequence spoofs, if registered.
    std::optional<char32_t> source_of(const std::u32string& replacement) const;

    // Number of registered (source, replacement) pairs.
    std::size_t entry_count() const { return entry_count_; }
    std::size_t source_count() const { return entries_.size(); }

    bool operator==(const ConfusableMap& other) const;

private:
    std::unordered_map<char32_t, std::vector<std::u32string>> entries_;
    std::map<std::u32string, char32_t> reverse_;
    std::size_t entry_count_ = 0;
};

}  // namespace textrojan
