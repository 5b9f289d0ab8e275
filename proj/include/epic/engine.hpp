#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epic/core.hpp"
#include "epic/errors.hpp"
#include "epic/gateway.hpp"
#include "epic/lexicon.hpp"
#include "epic/mutation.hpp"
#include "epic/rng.hpp"
#include "epic/sandbox.hpp"

namespace epic {

struct EngineConfig {
    int pop_size = 5;
    int max_generations = 5;
    int patience = 2;  // generations without best-fitness improvement before stopping
    MutationConfig mutation;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (pop_size < 2) throw ConfigError("pop_size must be >= 2 (one elite plus N-1 mutants)");
        if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
        if (patience < 1) throw ConfigError("patience must be >= 1");
        mutation.validate();
    }
};

// How candidate prompts get turned into (code, fitness). The production
// implementation generates code through the gateway and executes it in the
// sandbox; property tests substitute synthetic landscapes.
class PromptEvaluator {
public:
    virtual ~PromptEvaluator() = default;
    virtual Evaluation evaluate(const std::string& prompt, const std::vector<TestCase>& tests,
                                Gateway& gateway, const std::string& tag) = 0;
};

class SandboxPromptEvaluator : public PromptEvaluator {
public:
    SandboxPromptEvaluator(const Sandbox& sandbox, PromptTemplates templates)
        : sandbox_(sandbox), templates_(std::move(templates)) {}

    Evaluation evaluate(const std::string& prompt, const std::vector<TestCase>& tests, Gateway& gateway,
                        const std::string& tag) override {
        return sandbox_.evaluate_prompt(prompt, tests, gateway, templates_, tag);
    }

private:
    const Sandbox& sandbox_;
    PromptTemplates templates_;
};

// Everything a run needs besides the problem and the config.
struct EngineContext {
    Gateway& gateway;
    PromptEvaluator& evaluator;
    const Sandbox& sandbox;  // test parsing/validation
    const Lexicon& lexicon;  // similar-words mutation
    PromptTemplates templates;
};

// State handed from a non-solving IE phase into the evolutionary phase:
// the original prompt, the test suite fixed for the whole run, and the
// original prompt's evaluation.
struct SeedState {
    std::string prompt;
    std::vector<TestCase> tests;
    std::string code;
    FitnessScore fitness;
};

// Weighted selection with replacement, P(i) proportional to fitness; all
// weights zero falls back to uniform. Returns n indices into `candidates`.
inline std::vector<size_t> choose_candidates(const std::vector<PromptCandidate>& candidates, size_t n,
                                             Rng& rng) {
    if (candidates.empty()) throw Error("choose_candidates: no candidates");
    std::vector<double> cumulative(candidates.size());
    double total = 0.0;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].fitness) throw Error("choose_candidates: unevaluated candidate");
        total += candidates[i].fitness->value();
        cumulative[i] = total;
    }
    std::vector<size_t> picks;
    picks.reserve(n);
    for (size_t d = 0; d < n; ++d) {
        if (total <= 0.0) {
            picks.push_back(rng.next_below(candidates.size()));
            continue;
        }
        double u = rng.next_double() * total;
        size_t lo = 0;
        while (lo + 1 < cumulative.size() && cumulative[lo] <= u) ++lo;
        picks.push_back(lo);
    }
    return picks;
}

// Elitism is the deterministic argmax (exact rational comparison); ties go
// to the lowest index.
inline size_t select_elite_index(const std::vector<PromptCandidate>& candidates) {
    if (candidates.empty()) throw Error("select_elite_index: no candidates");
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        if (!candidates[i].fitness || !candidates[best].fitness)
            throw Error("select_elite_index: unevaluated candidate");
        if (*candidates[i].fitness > *candidates[best].fitness) best = i;
    }
    return best;
}

// Stop when max_generations snapshots exist, or when the last `patience`
// snapshots brought no strictly better best_fitness than everything before
// them. An empty history never stops the loop.
inline bool convergence_met(const std::vector<GenerationSnapshot>& history, const EngineConfig& cfg) {
    if (history.size() >= static_cast<size_t>(cfg.max_generations)) return true;
    if (history.size() >= static_cast<size_t>(cfg.patience) + 1) {
        size_t split = history.size() - static_cast<size_t>(cfg.patience);
        double before = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < split; ++i) before = std::max(before, history[i].best_fitness);
        double recent = -std::numeric_limits<double>::infinity();
        for (size_t i = split; i < history.size(); ++i) recent = std::max(recent, history[i].best_fitness);
        if (recent <= before) return true;
    }
    return false;
}

// Builds the first generation: pop_size independent rewrites of the
// original prompt at the population-build temperature, every candidate
// carrying the fixed test suite. A failed rewrite call falls back to the
// original prompt so the population always has exactly pop_size members.
inline std::vector<PromptCandidate> generate_first_population(int pop_size, const std::string& prompt,
                                                              const std::vector<TestCase>& tests,
                                                              Gateway& gateway,
                                                              const PromptTemplates& templates,
                                                              const std::string& problem_id) {
    std::vector<PromptCandidate> population;
    population.reserve(pop_size);
    for (int i = 0; i < pop_size; ++i) {
        PromptCandidate cand;
        cand.tests = tests;
        cand.generation = 0;
        CompletionRequest req;
        req.system_text = templates.rewrite;
        req.user_text = prompt;
        req.temperature = kTemperaturePopulationBuild;
        req.tag = problem_id + "/population-build/" + std::to_string(i);
        try {
            cand.prompt_text = gateway.complete(req).text;
            cand.origin = Origin::rewrite;
        } catch (const GatewayError&) {
            cand.prompt_text = prompt;
            cand.origin = Origin::initial;
        }
        population.push_back(std::move(cand));
    }
    return population;
}

namespace detail {

inline void validate_problem(const Problem& problem) {
    if (problem.id.empty()) throw Error("problem id must be nonempty");
    if (problem.prompt.empty()) throw Error("problem prompt must be nonempty");
    if (!strings::contains_identifier(problem.prompt, problem.entry_point))
        throw Error("entry point '" + problem.entry_point + "' does not occur in the prompt of problem '" +
                    problem.id + "'");
}

struct BestSoFar {
    FitnessScore fitness{0, 1};
    std::string code;
    bool seen = false;

    // Strictly-greater replacement keeps the earliest generation / lowest
    // index winner on ties.
    void offer(const FitnessScore& f, const std::string& c) {
        if (!seen || f > fitness) {
            fitness = f;
            code = c;
            seen = true;
        }
    }
};

inline PromptCandidate make_mutant(const PromptCandidate& parent, const Problem& problem,
                                   const EngineConfig& cfg, EngineContext& ctx, std::uint32_t generation,
                                   size_t slot) {
    std::string text;
    Origin origin;
    if (cfg.mutation.mutator_kind == MutatorKind::similar_words) {
        Rng rng(Rng::derive(cfg.rng_seed, 2, generation, slot));
        text = mutate_similar_words(parent.prompt_text, cfg.mutation, ctx.lexicon, rng);
        origin = Origin::mutation_similar_words;
    } else {
        try {
            text = mutate_llm(parent.prompt_text, ctx.gateway, ctx.templates,
                              problem.id + "/g" + std::to_string(generation) + "/mutate" +
                                  std::to_string(slot));
            origin = Origin::mutation_llm;
        } catch (const MutationParseError&) {
            text = parent.prompt_text;  // keep the unmutated candidate
            origin = parent.origin;
        }
    }
    PromptCandidate mutant;
    mutant.tests = parent.tests;
    mutant.generation = generation + 1;
    if (text == parent.prompt_text) {
        // unchanged text: the parent's evaluation still holds, no need to
        // spend tokens re-scoring it
        mutant.prompt_text = parent.prompt_text;
        mutant.code = parent.code;
        mutant.fitness = parent.fitness;
        mutant.origin = parent.origin;
    } else {
        mutant.prompt_text = std::move(text);
        mutant.origin = origin;
    }
    return mutant;
}

}  // namespace detail

// The IE phase: generate the test suite once (with a single retry), then
// evaluate the original prompt. A perfect score returns a finished record;
// otherwise the seed state carries the fixed suite into the EPE phase. A
// problem whose test generation fails twice comes back as an unevaluable
// record.
inline std::variant<RunRecord, SeedState> initial_evaluation(const Problem& problem, EngineContext& ctx) {
    detail::validate_problem(problem);

    std::vector<TestCase> valid_tests;
    std::string failure;
    for (int attempt = 0; attempt < 2 && valid_tests.empty(); ++attempt) {
        CompletionRequest req;
        req.system_text = ctx.templates.test_generation;
        req.user_text = problem.prompt;
        req.temperature = kTemperatureTestGeneration;
        req.tag = problem.id + "/test-gen";
        try {
            auto parsed = ctx.sandbox.parse_tests(ctx.gateway.complete(req).text);
            for (auto& t : parsed)
                if (t.valid) valid_tests.push_back(std::move(t));
            if (valid_tests.empty()) failure = "test generation produced no valid test cases";
        } catch (const TestExtractionError& e) {
            failure = e.what();
        }
    }
    if (valid_tests.empty()) {
        RunRecord rec;
        rec.problem_id = problem.id;
        rec.phase_reached = Phase::IE;
        rec.final_fitness = {0, 1};
        rec.error = "unevaluable: " + failure;
        return rec;
    }

    auto eval = ctx.evaluator.evaluate(problem.prompt, valid_tests, ctx.gateway, problem.id + "/ie-codegen");
    if (eval.fitness.perfect()) {
        RunRecord rec;
        rec.problem_id = problem.id;
        rec.phase_reached = Phase::IE;
        rec.solved = true;
        rec.final_code = eval.code;
        rec.final_fitness = eval.fitness;
        return rec;
    }
    return SeedState{problem.prompt, std::move(valid_tests), std::move(eval.code), eval.fitness};
}

// The EPE phase, starting from a seeded state. Exposed separately so the
// loop's invariants can be exercised without an interpreter or a live
// test-generation step.
inline RunRecord evolve_from_seed(const Problem& problem, const EngineConfig& cfg, EngineContext& ctx,
                                  const SeedState& seed) {
    RunRecord rec;
    rec.problem_id = problem.id;
    rec.phase_reached = Phase::EPE;
    rec.rng_seed = cfg.rng_seed;

    detail::BestSoFar best;
    best.offer(seed.fitness, seed.code);

    std::vector<GenerationSnapshot> history;
    try {
        auto population = generate_first_population(cfg.pop_size, seed.prompt, seed.tests, ctx.gateway,
                                                    ctx.templates, problem.id);
        std::uint32_t generation = 0;
        while (!convergence_met(history, cfg)) {
            for (size_t i = 0; i < population.size(); ++i) {
                auto& cand = population[i];
                if (!cand.fitness) {
                    auto ev = ctx.evaluator.evaluate(cand.prompt_text, cand.tests, ctx.gateway,
                                                     problem.id + "/g" + std::to_string(generation) + "/c" +
                                                         std::to_string(i));
                    cand.code = std::move(ev.code);
                    cand.fitness = ev.fitness;
                }
                if (cand.fitness->perfect()) {
                    // early exit: no further calls are attributed to this problem
                    rec.solved = true;
                    rec.final_code = *cand.code;
                    rec.final_fitness = *cand.fitness;
                    rec.generations = std::move(history);
                    return rec;
                }
            }

            GenerationSnapshot snap;
            snap.index = generation;
            snap.candidates = population;
            double best_value = 0.0;
            for (const auto& c : population) best_value = std::max(best_value, c.fitness->value());
            snap.best_fitness = best_value;
            history.push_back(std::move(snap));
            for (size_t i = 0; i < population.size(); ++i) best.offer(*population[i].fitness, *population[i].code);

            if (convergence_met(history, cfg)) break;  // mutating another generation would be discarded

            Rng selection_rng(Rng::derive(cfg.rng_seed, 1, generation));
            auto parents = choose_candidates(population, cfg.pop_size - 1, selection_rng);
            size_t elite = select_elite_index(population);

            std::vector<PromptCandidate> next;
            next.reserve(cfg.pop_size);
            PromptCandidate carried = population[elite];
            carried.origin = Origin::elite;
            carried.generation = generation + 1;
            next.push_back(std::move(carried));
            for (size_t j = 0; j < parents.size(); ++j)
                next.push_back(
                    detail::make_mutant(population[parents[j]], problem, cfg, ctx, generation, j));
            population = std::move(next);
            ++generation;
        }
    } catch (const GatewayError& e) {
        rec.error = e.what();
    }

    rec.generations = std::move(history);
    rec.solved = best.fitness.perfect();
    rec.final_code = best.code;
    rec.final_fitness = best.fitness;
    return rec;
}

// Algorithm entry point: IE, then EPE when needed. Token totals are the
// ledger entries attributed to this problem; wall_time covers the whole
// run.
inline RunRecord evolve(const Problem& problem, const EngineConfig& cfg, EngineContext& ctx) {
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();
    auto tokens_before = ctx.gateway.ledger().totals_for_tag_prefix(problem.id + "/");

    RunRecord rec;
    try {
        auto outcome = initial_evaluation(problem, ctx);
        if (std::holds_alternative<RunRecord>(outcome)) {
            rec = std::get<RunRecord>(std::move(outcome));
            rec.rng_seed = cfg.rng_seed;
        } else {
            rec = evolve_from_seed(problem, cfg, ctx, std::get<SeedState>(outcome));
        }
    } catch (const GatewayError& e) {
        rec.problem_id = problem.id;
        rec.phase_reached = Phase::IE;
        rec.final_fitness = {0, 1};
        rec.rng_seed = cfg.rng_seed;
        rec.error = e.what();
    }

    auto tokens_after = ctx.gateway.ledger().totals_for_tag_prefix(problem.id + "/");
    rec.tokens_in = tokens_after.tokens_in - tokens_before.tokens_in;
    rec.tokens_out = tokens_after.tokens_out - tokens_before.tokens_out;
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

}  // namespace epic
