// Minimal end-to-end run against the offline mock provider: the original
// prompt generates wrong code, and the similar-words mutator has to
// rediscover the wording the mock rewards ("accept"/"require"/...).
//
// Usage: evolve_demo [path-to-data/lexicon]

#include <iostream>
#include <memory>

#include "epic/epic.hpp"

int main(int argc, char** argv) {
    using namespace epic;

    std::string lexicon_dir = argc > 1 ? argv[1] : "data/lexicon";
    auto lexicon = Lexicon::load({lexicon_dir + "/embeddings.vec", lexicon_dir + "/synonyms.tsv", "",
                                  lexicon_dir + "/lemma_exceptions.tsv"});

    Problem problem;
    problem.id = "demo/shift";
    problem.entry_point = "shift_by_two";
    problem.prompt =
        "def shift_by_two(x):\n"
        "    \"\"\"This function takes a number and returns the shifted value.\"\"\"\n";

    auto mock = std::make_unique<MockProvider>();
    mock->add_rule({.tag_contains = "/test-gen",
                    .response = "$$$$\nassert shift_by_two(1) == 3\nassert shift_by_two(0) == 2\n"
                                "assert shift_by_two(-5) == -3\n$$$$"});
    // a rewrite that just echoes the prompt: diversity comes from mutation
    mock->add_rule({.tag_contains = "population-build", .response = problem.prompt});
    for (const char* keyword : {"accept", "require", "carry", "hold"})
        mock->add_rule({.user_contains = keyword,
                        .response = "```python\ndef shift_by_two(x):\n    return x + 2\n```"});
    mock->set_default("```python\ndef shift_by_two(x):\n    return x - 2\n```");

    Gateway gateway(std::move(mock));
    Sandbox sandbox;
    PromptTemplates templates;
    SandboxPromptEvaluator evaluator(sandbox, templates);
    EngineContext ctx{gateway, evaluator, sandbox, lexicon, templates};

    // the landscape is flat until a rewarded word appears, so give the
    // search room before the stagnation stop kicks in
    EngineConfig cfg;
    cfg.rng_seed = 7;
    cfg.max_generations = 10;
    cfg.patience = 6;
    cfg.mutation.mutation_probability = 0.4;
    auto record = evolve(problem, cfg, ctx);

    std::cout << "solved: " << (record.solved ? "yes" : "no") << "\n"
              << "generations: " << record.generations.size() << "\n"
              << "tokens: " << record.tokens_in + record.tokens_out << "\n"
              << "final code:\n"
              << record.final_code;
    for (const auto& snap : record.generations)
        std::cout << "gen " << snap.index << " best fitness " << snap.best_fitness << "\n";
    return record.solved ? 0 : 1;
}
