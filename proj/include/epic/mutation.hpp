#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epic/errors.hpp"
#include "epic/gateway.hpp"
#include "epic/lexicon.hpp"
#include "epic/rng.hpp"
#include "epic/strings.hpp"

namespace epic {

enum class MutatorKind { similar_words, llm };

struct MutationConfig {
    double sim_t = 0.5;
    size_t num_t = 10;
    double mutation_probability = 0.3;
    MutatorKind mutator_kind = MutatorKind::similar_words;

    void validate() const {
        if (mutation_probability < 0.0 || mutation_probability > 1.0)
            throw ConfigError("mutation_probability must be in [0,1]");
        if (num_t < 1) throw ConfigError("num_t must be >= 1");
    }
};

// Where the description sits inside a prompt. rebuild() reinserts any text
// and yields a well-formed prompt; bytes outside the hole are reproduced
// verbatim.
struct PromptSkeleton {
    enum class Kind { span, comment_block, identity };
    Kind kind = Kind::identity;
    std::string prefix;
    std::string suffix;
    std::string comment_prefix;  // comment_block only: e.g. "    # "

    std::string rebuild(const std::string& description) const {
        switch (kind) {
            case Kind::identity: return description;
            case Kind::span: return prefix + description + suffix;
            case Kind::comment_block: {
                std::string body = comment_prefix;
                for (char c : description) {
                    body += c;
                    if (c == '\n') body += comment_prefix;
                }
                return prefix + body + suffix;
            }
        }
        return description;
    }
};

struct DescriptionExtract {
    std::string description;
    PromptSkeleton skeleton;
    bool whole_prompt_fallback = false;  // no docstring and no comments found
};

namespace detail {

// Example/assertion lines embedded in a description are never mutated.
inline bool is_protected_description_line(std::string_view line) {
    auto t = strings::trim(line);
    if (strings::starts_with(t, ">>>")) return true;
    if (strings::starts_with(t, "assert") &&
        (t.size() == 6 || t[6] == ' ' || t[6] == '(' || t[6] == '\t'))
        return true;
    return false;
}

struct OuterPunct {
    std::string_view prefix, core, suffix;
};

inline bool is_word_char(char c) { return strings::is_alpha(c) || strings::is_digit(c) || c == '_'; }

inline OuterPunct strip_outer_punct(std::string_view token) {
    size_t b = 0, e = token.size();
    while (b < e && !is_word_char(token[b])) ++b;
    while (e > b && !is_word_char(token[e - 1])) --e;
    return {token.substr(0, b), token.substr(b, e - b), token.substr(e)};
}

inline bool ends_sentence(std::string_view token) {
    size_t e = token.size();
    while (e > 0 && (token[e - 1] == ')' || token[e - 1] == ']' || token[e - 1] == '}' ||
                     token[e - 1] == '"' || token[e - 1] == '\''))
        --e;
    return e > 0 && (token[e - 1] == '.' || token[e - 1] == '!' || token[e - 1] == '?');
}

inline std::string match_case(std::string_view replacement, std::string_view original) {
    std::string out(replacement);
    if (!out.empty() && !original.empty() && strings::is_upper(original.front()))
        out.front() = strings::to_upper(out.front());
    return out;
}

}  // namespace detail

// Pulls the natural-language description out of a prompt: the prose of the
// first docstring (stopping at embedded assert/example lines, which stay
// protected), or the first comment block when there is no docstring. A
// prompt with neither comes back whole, flagged as a fallback.
inline DescriptionExtract extract_description(const std::string& prompt) {
    if (prompt.empty()) throw Error("extract_description: empty prompt");

    // docstring path
    size_t open = std::string::npos;
    std::string_view delim;
    for (std::string_view d : {std::string_view{"\"\"\""}, std::string_view{"'''"}}) {
        size_t p = prompt.find(d);
        if (p != std::string::npos && p < open) {
            open = p;
            delim = d;
        }
    }
    if (open != std::string::npos) {
        size_t body_begin = open + delim.size();
        size_t close = prompt.find(delim, body_begin);
        if (close != std::string::npos) {
            // stop the hole at the first protected line inside the body
            size_t hole_end = close;
            size_t line_begin = body_begin;
            while (line_begin < close) {
                size_t line_end = prompt.find('\n', line_begin);
                if (line_end == std::string::npos || line_end > close) line_end = close;
                std::string_view line{prompt.data() + line_begin, line_end - line_begin};
                if (detail::is_protected_description_line(line)) {
                    hole_end = line_begin;
                    break;
                }
                line_begin = line_end + 1;
            }
            // trim the hole's margins into prefix/suffix so layout survives
            size_t b = body_begin, e = hole_end;
            while (b < e && strings::is_space(prompt[b])) ++b;
            while (e > b && strings::is_space(prompt[e - 1])) --e;
            DescriptionExtract ex;
            ex.description = prompt.substr(b, e - b);
            ex.skeleton = {PromptSkeleton::Kind::span, prompt.substr(0, b), prompt.substr(e), ""};
            return ex;
        }
    }

    // comment-block path
    {
        size_t pos = 0;
        while (pos < prompt.size()) {
            size_t line_end = prompt.find('\n', pos);
            if (line_end == std::string::npos) line_end = prompt.size();
            std::string_view line{prompt.data() + pos, line_end - pos};
            auto t = strings::trim(line);
            if (strings::starts_with(t, "#")) {
                auto comment_text = [&](std::string_view l) {
                    auto s = strings::trim(l);
                    s.remove_prefix(1);
                    if (!s.empty() && s.front() == ' ') s.remove_prefix(1);
                    return s;
                };
                if (!detail::is_protected_description_line(comment_text(line))) {
                    size_t block_begin = pos;
                    size_t block_end = line_end;
                    std::vector<std::string> body_lines{std::string(comment_text(line))};
                    size_t next = line_end == prompt.size() ? prompt.size() : line_end + 1;
                    while (next < prompt.size()) {
                        size_t le = prompt.find('\n', next);
                        if (le == std::string::npos) le = prompt.size();
                        std::string_view l{prompt.data() + next, le - next};
                        auto lt = strings::trim(l);
                        if (!strings::starts_with(lt, "#") ||
                            detail::is_protected_description_line(comment_text(l)))
                            break;
                        body_lines.push_back(std::string(comment_text(l)));
                        block_end = le;
                        next = le == prompt.size() ? prompt.size() : le + 1;
                    }
                    std::string_view first_line{prompt.data() + block_begin, line.size()};
                    size_t hash = first_line.find('#');
                    std::string comment_prefix(first_line.substr(0, hash + 1));
                    if (hash + 1 < first_line.size() && first_line[hash + 1] == ' ') comment_prefix += ' ';
                    DescriptionExtract ex;
                    ex.description = strings::join(body_lines, "\n");
                    ex.skeleton = {PromptSkeleton::Kind::comment_block, prompt.substr(0, block_begin),
                                   prompt.substr(block_end), comment_prefix};
                    return ex;
                }
            }
            pos = line_end == prompt.size() ? prompt.size() : line_end + 1;
        }
    }

    DescriptionExtract ex;
    ex.description = prompt;
    ex.skeleton = {PromptSkeleton::Kind::identity, "", "", ""};
    ex.whole_prompt_fallback = true;
    return ex;
}

// Word-for-word synonym substitution over the description. Each whitespace
// token draws one gate sample; a token actually changes only when it is
// mutable, has at least one related word, and the gate falls at or below
// mutation_probability; otherwise the original token (candidate list
// position 0) survives. Substitutes are drawn uniformly from positions
// 1..end. A run with zero substitutions returns the prompt byte-identical.
inline std::string mutate_similar_words(const std::string& prompt, const MutationConfig& cfg,
                                        const Lexicon& lexicon, Rng& rng) {
    cfg.validate();
    auto ex = extract_description(prompt);
    auto tokens = strings::split_ws(ex.description);
    if (tokens.empty()) return prompt;

    std::vector<std::string> out;
    out.reserve(tokens.size());
    bool changed = false;
    bool sentence_initial = true;
    for (const auto& token : tokens) {
        auto parts = detail::strip_outer_punct(token);
        auto position = sentence_initial ? TokenPosition::sentence_initial : TokenPosition::interior;
        sentence_initial = detail::ends_sentence(token);

        std::vector<std::string> related;
        if (!parts.core.empty() && lexicon.is_mutable_token(parts.core, position))
            related = lexicon.get_related_words({lexicon.lemmatize(parts.core), cfg.sim_t, cfg.num_t});

        double gate = rng.next_double();
        if (related.size() <= 1 || gate > cfg.mutation_probability) {
            out.push_back(token);  // keep the original word
            continue;
        }
        const auto& pick = related[1 + rng.next_below(related.size() - 1)];
        std::string replacement = std::string(parts.prefix) + detail::match_case(pick, parts.core) +
                                  std::string(parts.suffix);
        changed |= replacement != token;
        out.push_back(std::move(replacement));
    }
    if (!changed) return prompt;
    return ex.skeleton.rebuild(strings::join(out, " "));
}

inline constexpr std::string_view kMutationBeginMarker = "#Explanation";
inline constexpr std::string_view kMutationEndMarker = "#End";

// Asks the LLM to rewrite the description and reinserts the text found
// between the #Explanation / #End markers. Missing markers raise
// MutationParseError so the caller can keep the unmutated candidate.
inline std::string mutate_llm(const std::string& prompt, Gateway& gateway,
                              const PromptTemplates& templates, const std::string& tag) {
    CompletionRequest req;
    req.system_text = templates.mutation;
    req.user_text = prompt;
    req.temperature = kTemperatureLlmMutation;
    req.tag = tag;
    auto resp = gateway.complete(req);

    size_t begin = resp.text.find(kMutationBeginMarker);
    if (begin == std::string::npos)
        throw MutationParseError("mutation response lacks the #Explanation marker");
    begin += kMutationBeginMarker.size();
    size_t end = resp.text.find(kMutationEndMarker, begin);
    if (end == std::string::npos) throw MutationParseError("mutation response lacks the #End marker");
    std::string new_description{strings::trim(std::string_view{resp.text}.substr(begin, end - begin))};

    auto ex = extract_description(prompt);
    return ex.skeleton.rebuild(new_description);
}

}  // namespace epic
