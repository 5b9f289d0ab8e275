#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace epic::strings {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
inline bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
inline bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
inline char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
inline char to_upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](char c) { return to_lower(c); });
    return out;
}

inline std::string_view trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// Whitespace tokenization, python str.split() style: no empty tokens.
inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        size_t b = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > b) out.emplace_back(s.substr(b, i - b));
    }
    return out;
}

inline size_t count_ws_tokens(std::string_view s) {
    size_t n = 0, i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        if (i < s.size()) ++n;
        while (i < s.size() && !is_space(s[i])) ++i;
    }
    return n;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t b = 0;
    while (true) {
        size_t e = s.find(sep, b);
        if (e == std::string_view::npos) {
            out.emplace_back(s.substr(b));
            break;
        }
        out.emplace_back(s.substr(b, e - b));
        b = e + 1;
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

inline bool contains(std::string_view s, std::string_view needle) {
    return s.find(needle) != std::string_view::npos;
}

// Occurrence of `word` delimited by non-identifier characters; used to check
// that an entry point really appears in a prompt.
inline bool contains_identifier(std::string_view s, std::string_view word) {
    if (word.empty()) return false;
    auto is_ident = [](char c) { return is_alpha(c) || is_digit(c) || c == '_'; };
    size_t pos = 0;
    while ((pos = s.find(word, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !is_ident(s[pos - 1]);
        size_t end = pos + word.size();
        bool right_ok = end == s.size() || !is_ident(s[end]);
        if (left_ok && right_ok) return true;
        pos += 1;
    }
    return false;
}

}  // namespace epic::strings
