#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epic/errors.hpp"

namespace epic {

using json = nlohmann::json;

// One executable assertion. `valid` records whether it parsed as a single
// well-formed assert statement; invalid cases are kept for the record but
// never contribute to fitness.
struct TestCase {
    std::string source;
    bool valid = false;

    bool operator==(const TestCase&) const = default;
};

// A coding task. `reference_tests` are held out from the optimizer and used
// only for final scoring.
struct Problem {
    std::string id;
    std::string prompt;
    std::string entry_point;
    std::vector<TestCase> reference_tests;
};

// Pass rate kept as the exact ratio passed/total. Orderings use
// cross-multiplication so candidates with equal rates compare equal no
// matter the denominators.
struct FitnessScore {
    std::uint64_t passed = 0;
    std::uint64_t total = 1;

    double value() const { return static_cast<double>(passed) / static_cast<double>(total); }
    bool perfect() const { return passed == total; }

    friend bool operator==(const FitnessScore& a, const FitnessScore& b) {
        return a.passed * b.total == b.passed * a.total;
    }
    friend bool operator<(const FitnessScore& a, const FitnessScore& b) {
        return a.passed * b.total < b.passed * a.total;
    }
    friend bool operator>(const FitnessScore& a, const FitnessScore& b) { return b < a; }
    friend bool operator<=(const FitnessScore& a, const FitnessScore& b) { return !(b < a); }
    friend bool operator>=(const FitnessScore& a, const FitnessScore& b) { return !(a < b); }
};

enum class Origin { initial, rewrite, elite, mutation_similar_words, mutation_llm };

inline std::string to_string(Origin o) {
    switch (o) {
        case Origin::initial: return "initial";
        case Origin::rewrite: return "rewrite";
        case Origin::elite: return "elite";
        case Origin::mutation_similar_words: return "mutation-similar-words";
        case Origin::mutation_llm: return "mutation-llm";
    }
    return "initial";
}

inline Origin origin_from_string(const std::string& s) {
    if (s == "initial") return Origin::initial;
    if (s == "rewrite") return Origin::rewrite;
    if (s == "elite") return Origin::elite;
    if (s == "mutation-similar-words") return Origin::mutation_similar_words;
    if (s == "mutation-llm") return Origin::mutation_llm;
    throw Error("unknown candidate origin: " + s);
}

// One individual: a prompt plus the fixed internal test suite it is judged
// against. Code and fitness appear together once the candidate has been
// evaluated.
struct PromptCandidate {
    std::string prompt_text;
    std::vector<TestCase> tests;
    std::optional<std::string> code;
    std::optional<FitnessScore> fitness;
    Origin origin = Origin::initial;
    std::uint32_t generation = 0;
};

struct GenerationSnapshot {
    std::uint32_t index = 0;
    std::vector<PromptCandidate> candidates;
    double best_fitness = 0.0;
};

enum class Phase { IE, EPE };

inline std::string to_string(Phase p) { return p == Phase::IE ? "IE" : "EPE"; }

// Full per-problem optimization trace. Serializes to one JSON object per
// line in the run log.
struct RunRecord {
    std::string problem_id;
    Phase phase_reached = Phase::IE;
    std::vector<GenerationSnapshot> generations;
    bool solved = false;
    std::string final_code;
    FitnessScore final_fitness;
    std::uint64_t tokens_in = 0;
    std::uint64_t tokens_out = 0;
    double wall_time = 0.0;  // seconds
    std::uint64_t rng_seed = 0;
    std::string error;  // empty when the run completed normally
};

// The fitness function: fraction of per-test outcomes that passed.
inline FitnessScore pass_rate(const std::vector<bool>& outcomes) {
    if (outcomes.empty()) throw Error("pass_rate: a candidate must be judged against at least one test");
    std::uint64_t passed = 0;
    for (bool ok : outcomes)
        if (ok) ++passed;
    return FitnessScore{passed, outcomes.size()};
}

// --- JSON (snake_case field names, matching the run-log schema) ---

inline void to_json(json& j, const TestCase& t) { j = json{{"source", t.source}, {"valid", t.valid}}; }
inline void from_json(const json& j, TestCase& t) {
    j.at("source").get_to(t.source);
    j.at("valid").get_to(t.valid);
}

inline void to_json(json& j, const FitnessScore& f) {
    j = json{{"passed", f.passed}, {"total", f.total}, {"value", f.value()}};
}
inline void from_json(const json& j, FitnessScore& f) {
    j.at("passed").get_to(f.passed);
    j.at("total").get_to(f.total);
}

inline void to_json(json& j, const PromptCandidate& c) {
    j = json{{"prompt_text", c.prompt_text},
             {"tests", c.tests},
             {"code", c.code ? json(*c.code) : json(nullptr)},
             {"fitness", c.fitness ? json(*c.fitness) : json(nullptr)},
             {"origin", to_string(c.origin)},
             {"generation", c.generation}};
}
inline void from_json(const json& j, PromptCandidate& c) {
    j.at("prompt_text").get_to(c.prompt_text);
    j.at("tests").get_to(c.tests);
    if (!j.at("code").is_null()) c.code = j.at("code").get<std::string>();
    if (!j.at("fitness").is_null()) c.fitness = j.at("fitness").get<FitnessScore>();
    c.origin = origin_from_string(j.at("origin").get<std::string>());
    j.at("generation").get_to(c.generation);
}

inline void to_json(json& j, const GenerationSnapshot& s) {
    j = json{{"index", s.index}, {"candidates", s.candidates}, {"best_fitness", s.best_fitness}};
}
inline void from_json(const json& j, GenerationSnapshot& s) {
    j.at("index").get_to(s.index);
    j.at("candidates").get_to(s.candidates);
    j.at("best_fitness").get_to(s.best_fitness);
}

inline void to_json(json& j, const RunRecord& r) {
    j = json{{"problem_id", r.problem_id},
             {"phase_reached", to_string(r.phase_reached)},
             {"generations", r.generations},
             {"solved", r.solved},
             {"final_code", r.final_code},
             {"final_fitness", r.final_fitness},
             {"tokens_in", r.tokens_in},
             {"tokens_out", r.tokens_out},
             {"wall_time", r.wall_time},
             {"rng_seed", r.rng_seed},
             {"error", r.error}};
}
inline void from_json(const json& j, RunRecord& r) {
    j.at("problem_id").get_to(r.problem_id);
    r.phase_reached = j.at("phase_reached").get<std::string>() == "IE" ? Phase::IE : Phase::EPE;
    j.at("generations").get_to(r.generations);
    j.at("solved").get_to(r.solved);
    j.at("final_code").get_to(r.final_code);
    j.at("final_fitness").get_to(r.final_fitness);
    j.at("tokens_in").get_to(r.tokens_in);
    j.at("tokens_out").get_to(r.tokens_out);
    j.at("wall_time").get_to(r.wall_time);
    j.at("rng_seed").get_to(r.rng_seed);
    if (j.contains("error")) j.at("error").get_to(r.error);
}

inline void to_json(json& j, const Problem& p) {
    j = json{{"task_id", p.id}, {"prompt", p.prompt}, {"entry_point", p.entry_point}};
    if (!p.reference_tests.empty()) j["reference_tests"] = p.reference_tests;
}

}  // namespace epic
