#include "textrojan/confusables.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace textrojan {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

char32_t parse_hex_codepoint(const std::string& token, const std::string& name,
                             std::size_t line_no) {
    if (token.empty() || token.size() > 6) {
        throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                 ": malformed hex field '" + token + "'");
    }
    char32_t value = 0;
    for (char c : token) {
        int digit;
        if (c >= '0' && c <= '9') {
            digit = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            digit = 10 + (c - 'a');
        } else if (c >= 'A' && c <= 'F') {
            digit = 10 + (c - 'A');
        } else {
            throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                     ": malformed hex field '" + token + "'");
        }
        value = (value << 4) | static_cast<char32_t>(digit);
    }
    if (value > 0x10FFFF) {
        throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                 ": code point out of range '" + token + "'");
    }
    return value;
}

std::vector<std::string> split_hex_tokens(const std::string& field) {
    std::vector<std::string> out;
    std::istringstream iss(field);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

ConfusableMap ConfusableMap::load(const std::filesystem::path& path,
                                  const std::set<std::string>& types) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open confusables file: " +
                                 path.string());
    }
    return parse(in, path.string(), types);
}

ConfusableMap ConfusableMap::parse(std::istream& in, const std::string& name,
                                   const std::set<std::string>& types) {
    ConfusableMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip a UTF-8 BOM on the first line and any trailing comment.
        if (line_no == 1 && line.size() >= 3 && line[0] == '\xEF' &&
            line[1] == '\xBB' && line[2] == '\xBF') {
            line.erase(0, 3);
        }
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto semi = line.find(';', start);
            if (semi == std::string::npos) {
                fields.push_back(trim(line.substr(start)));
                break;
            }
            fields.push_back(trim(line.substr(start, semi - start)));
            start = semi + 1;
        }
        if (fields.size() < 3) {
            throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                     ": expected 3 semicolon-separated fields");
        }

        const auto variant_toks = split_hex_tokens(fields[0]);
        if (variant_toks.size() != 1) {
            throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                     ": first field must be one code point");
        }
        const auto source_toks = split_hex_tokens(fields[1]);
        if (source_toks.empty()) {
            throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                     ": second field must not be empty");
        }
        const std::string& type = fields[2];
        if (type.empty()) {
            throw std::runtime_error(name + ":" + std::to_string(line_no) +
                                     ": missing type field");
        }
        if (!types.empty() && !types.count(type)) continue;

        const char32_t variant =
            parse_hex_codepoint(variant_toks[0], name, line_no);
        std::u32string source_seq;
        for (const auto& tok : source_toks) {
            source_seq.push_back(parse_hex_codepoint(tok, name, line_no));
        }
        // Only single-code-point prototypes can key a one-character
        // replacement; longer ones are validated above and dropped.
        if (source_seq.size() != 1) continue;
        const char32_t source = source_seq[0];
        if (source == variant) continue;

        const std::u32string replacement(1, variant);
        auto& list = map.entries_[source];
        if (std::find(list.begin(), list.end(), replacement) != list.end()) {
            continue;  // duplicate (src,tgt) pair
        }
        if (auto it = map.reverse_.find(replacement);
            it != map.reverse_.end() && it->second != source) {
            continue;  // variant already bound to a different source
        }
        list.push_back(replacement);
        map.reverse_[replacement] = source;
        ++map.entry_count_;
    }
    if (map.entry_count_ == 0) {
        throw std::runtime_error(name + ": empty dictionary (no valid entries)");
    }
    return map;
}

const std::vector<std::u32string>& ConfusableMap::homographs_of(
    char32_t c) const {
    static const std::vector<std::u32string> kEmpty;
    const auto it = entries_.find(c);
    return it == entries_.end() ? kEmpty : it->second;
}

std::optional<char32_t> ConfusableMap::source_of(
    const std::u32string& replacement) const {
    const auto it = reverse_.find(replacement);
    if (it == reverse_.end()) return std::nullopt;
    return it->second;
}

bool ConfusableMap::operator==(const ConfusableMap& other) const {
    if (entry_count_ != other.entry_count_ || reverse_ != other.reverse_)
        return false;
    if (entries_.size() != other.entries_.size()) return false;
    for (const auto& [src, list] : entries_) {
        const auto it = other.entries_.find(src);
        if (it == other.entries_.end() || it->second != list) return false;
    }
    return true;
}

}  // namespace textrojan
