#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace textrojan::uni {

// One decoded code point together with its byte span in the original string.
struct Utf8Char {
    char32_t cp;
    std::size_t byte_offset;
    std::size_t byte_len;
};

// Decodes a UTF-8 string into code points with byte offsets. Throws
// std::runtime_error on malformed input (truncated or overlong sequences).
std::vector<Utf8Char> scan_utf8(std::string_view text);

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

inline bool is_ascii(char32_t cp) { return cp <= 0x7F; }

// "Regular" characters eligible for homograph replacement: a-z, A-Z, 0-9.
inline bool is_regular(char32_t cp) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
}

inline bool is_ascii_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' ||
           cp == '\f' || cp == '\v';
}

inline bool is_ascii_punct(char32_t cp) {
    return cp <= 0x7F && !is_ascii_space(cp) && !is_regular(cp) &&
           cp >= 0x21;  // printable, not alnum, not space
}

inline char32_t ascii_lower(char32_t cp) {
    return (cp >= 'A' && cp <= 'Z') ? cp + ('a' - 'A') : cp;
}

}  // namespace textrojan::uni
