#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <set>

#include "epic/mutation.hpp"
#include "epic/strings.hpp"

using namespace epic;

namespace {

const Lexicon& fixture_lexicon() {
    static Lexicon lx = Lexicon::load({std::string(EPIC_DATA_DIR) + "/lexicon/embeddings.vec",
                                       std::string(EPIC_DATA_DIR) + "/lexicon/synonyms.tsv", "",
                                       std::string(EPIC_DATA_DIR) + "/lexicon/lemma_exceptions.tsv"});
    return lx;
}

const std::string kDocstringPrompt =
    "def add3Numbers(x, y, z):\n"
    "    \"\"\" Add three numbers together. This function takes three numbers as input and returns "
    "the sum of the three numbers.\"\"\"\n";

// A synthetic alphabetic vocabulary where every word has exactly nine
// single-token synonyms, so candidate lists are never singletons.
Lexicon synthetic_lexicon(size_t vocab) {
    SynonymTable table;
    for (size_t i = 0; i < vocab; ++i) {
        std::string head = "tok" + std::string(1, char('a' + i / 26)) + std::string(1, char('a' + i % 26));
        std::vector<std::string> syns;
        for (int s = 0; s < 9; ++s) syns.push_back(head + std::string(1, char('a' + s)));
        table.add(head, std::move(syns));
    }
    return Lexicon(EmbeddingIndex{}, std::move(table));
}

}  // namespace

TEST_CASE("extract_description finds a single docstring") {
    auto ex = extract_description("def f(x):\n  \"\"\"Add one.\"\"\"");
    CHECK(ex.description == "Add one.");
    CHECK_FALSE(ex.whole_prompt_fallback);
    CHECK(ex.skeleton.rebuild("Add one.") == "def f(x):\n  \"\"\"Add one.\"\"\"");
    CHECK(ex.skeleton.rebuild("Subtract two.") == "def f(x):\n  \"\"\"Subtract two.\"\"\"");
}

TEST_CASE("extract_description leaves embedded assertions outside the hole") {
    std::string prompt =
        "def f(x):\n"
        "    \"\"\"Increment the value.\n"
        "    assert f(1) == 2\n"
        "    assert f(5) == 6\n"
        "    \"\"\"\n";
    auto ex = extract_description(prompt);
    CHECK(ex.description == "Increment the value.");
    CHECK_FALSE(strings::contains(ex.description, "assert"));
    auto rebuilt = ex.skeleton.rebuild("Bump the number.");
    CHECK(strings::contains(rebuilt, "assert f(1) == 2"));
    CHECK(strings::contains(rebuilt, "assert f(5) == 6"));
    CHECK(strings::contains(rebuilt, "Bump the number."));
}

TEST_CASE("extract_description falls back to comment blocks") {
    std::string prompt = "# Count the words in a text.\n# Ignore punctuation.\ndef count_words(s):\n";
    auto ex = extract_description(prompt);
    CHECK(ex.description == "Count the words in a text.\nIgnore punctuation.");
    CHECK_FALSE(ex.whole_prompt_fallback);
    auto rebuilt = ex.skeleton.rebuild("New text.");
    CHECK(strings::contains(rebuilt, "# New text."));
    CHECK(strings::contains(rebuilt, "def count_words(s):"));
}

TEST_CASE("extract_description without docstring or comments returns the whole prompt") {
    auto ex = extract_description("def f(x): return x");
    CHECK(ex.description == "def f(x): return x");
    CHECK(ex.whole_prompt_fallback);
    CHECK(ex.skeleton.rebuild(ex.description) == "def f(x): return x");
}

TEST_CASE("mutation probability zero keeps the prompt byte-identical") {
    MutationConfig cfg;
    cfg.mutation_probability = 0.0;
    Rng rng(1234);
    CHECK(mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), rng) == kDocstringPrompt);
}

TEST_CASE("fixed seeds reproduce the same mutation") {
    MutationConfig cfg;
    cfg.mutation_probability = 0.6;
    Rng a(42), b(42), c(43);
    auto out_a = mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), a);
    auto out_b = mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), b);
    auto out_c = mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), c);
    CHECK(out_a == out_b);
    CHECK(out_a != kDocstringPrompt);
    CHECK(out_c != out_a);  // a different stream lands elsewhere
}

TEST_CASE("seed 42 reproduces the recorded golden output") {
    // frozen once against the bundled lexicon; catches drift in the rng
    // stream, the gating rules, and the fixture files alike
    MutationConfig cfg;  // defaults
    Rng rng(42);
    auto out = mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), rng);
    CHECK(out ==
          "def add3Numbers(x, y, z):\n"
          "    \"\"\" Add three integer jointly. This function takes three numeral as input and "
          "deliver the total of the three numbers.\"\"\"\n");
}

TEST_CASE("docstring extraction round-trips the original prompt") {
    for (const std::string prompt :
         {kDocstringPrompt,
          std::string("def f(x):\n  \"\"\"Add one.\"\"\""),
          std::string("def g():\n    '''Count\n    the words.\n    '''\n    pass\n"),
          std::string("def h(a, b):\n    \"\"\"Merge the lists.\n    assert h([], []) == []\n    \"\"\"\n")}) {
        auto ex = extract_description(prompt);
        CHECK(ex.skeleton.rebuild(ex.description) == prompt);
    }
}

TEST_CASE("protected tokens survive in place and counts are preserved") {
    std::string prompt =
        "def scan_Data(x):\n"
        "    \"\"\"The parser takes raw_input from Python and returns the total; see add3Numbers.\"\"\"\n";
    MutationConfig cfg;
    cfg.mutation_probability = 1.0;  // force every mutable token to move
    Rng rng(7);
    auto mutated = mutate_similar_words(prompt, cfg, fixture_lexicon(), rng);

    auto before = strings::split_ws(extract_description(prompt).description);
    auto after = strings::split_ws(extract_description(mutated).description);
    REQUIRE(before.size() == after.size());  // 1-for-1 substitution

    const auto& lx = fixture_lexicon();
    bool sentence_initial = true;
    for (size_t i = 0; i < before.size(); ++i) {
        auto parts = detail::strip_outer_punct(before[i]);
        auto pos = sentence_initial ? TokenPosition::sentence_initial : TokenPosition::interior;
        sentence_initial = detail::ends_sentence(before[i]);
        bool is_mutable = !parts.core.empty() && lx.is_mutable_token(parts.core, pos);
        if (!is_mutable) CHECK(before[i] == after[i]);
    }
    // the identifier, proper noun, and stop words specifically
    CHECK(strings::contains(mutated, "raw_input"));
    CHECK(strings::contains(mutated, "Python"));
    CHECK(strings::contains(mutated, "add3Numbers"));
}

TEST_CASE("non-description bytes are identical after mutation") {
    MutationConfig cfg;
    cfg.mutation_probability = 1.0;
    Rng rng(99);
    auto mutated = mutate_similar_words(kDocstringPrompt, cfg, fixture_lexicon(), rng);
    auto ex_in = extract_description(kDocstringPrompt);
    auto ex_out = extract_description(mutated);
    CHECK(ex_out.skeleton.prefix == ex_in.skeleton.prefix);
    CHECK(ex_out.skeleton.suffix == ex_in.skeleton.suffix);
    CHECK(mutated == ex_in.skeleton.rebuild(ex_out.description));
}

TEST_CASE("empirical mutation rate tracks the configured probability") {
    auto lx = synthetic_lexicon(200);
    // 2000 mutable tokens here; the acceptance suite runs the >=10k version
    std::vector<std::string> words;
    for (int rep = 0; rep < 10; ++rep)
        for (size_t i = 0; i < 200; ++i)
            words.push_back("tok" + std::string(1, char('a' + i / 26)) + std::string(1, char('a' + i % 26)));
    std::string prompt = "\"\"\"" + strings::join(words, " ") + "\"\"\"";

    MutationConfig cfg;
    cfg.mutation_probability = 0.3;
    Rng rng(2024);
    auto mutated = mutate_similar_words(prompt, cfg, lx, rng);
    auto after = strings::split_ws(extract_description(mutated).description);
    REQUIRE(after.size() == words.size());
    size_t changed = 0;
    for (size_t i = 0; i < words.size(); ++i) changed += words[i] != after[i] ? 1 : 0;
    double rate = double(changed) / double(words.size());
    CHECK_THAT(rate, Catch::Matchers::WithinAbs(cfg.mutation_probability, 0.05));
}

TEST_CASE("llm mutation extracts the marked description") {
    auto mock = std::make_unique<MockProvider>();
    mock->set_default("#Explanation Reversed words here #End");
    Gateway gw(std::move(mock));
    PromptTemplates templates;
    auto out = mutate_llm(kDocstringPrompt, gw, templates, "t/mutate");
    CHECK(strings::contains(out, "Reversed words here"));
    CHECK(strings::contains(out, "def add3Numbers(x, y, z):"));
    CHECK(gw.ledger().size() == 1);
    CHECK(gw.ledger().entries()[0].tag == "t/mutate");
}

TEST_CASE("llm mutation without markers is a parse error") {
    auto missing_end = std::make_unique<MockProvider>();
    missing_end->set_default("#Explanation text without terminator");
    Gateway gw1(std::move(missing_end));
    PromptTemplates templates;
    CHECK_THROWS_AS(mutate_llm(kDocstringPrompt, gw1, templates, "t/mutate"), MutationParseError);

    auto no_markers = std::make_unique<MockProvider>();
    no_markers->set_default("no markers at all");
    Gateway gw2(std::move(no_markers));
    CHECK_THROWS_AS(mutate_llm(kDocstringPrompt, gw2, templates, "t/mutate"), MutationParseError);
}

TEST_CASE("llm mutation round-trips through a describing provider") {
    // generator-style mock: rewrites the description by reversing its words
    struct ReverseProvider : Provider {
        CompletionResponse complete(const CompletionRequest& req) override {
            auto ex = extract_description(req.user_text);
            auto words = strings::split_ws(ex.description);
            std::reverse(words.begin(), words.end());
            CompletionResponse resp;
            resp.text = "#Explanation " + strings::join(words, " ") + " #End";
            resp.tokens_in = strings::count_ws_tokens(req.user_text);
            resp.tokens_out = strings::count_ws_tokens(resp.text);
            resp.provider = "mock";
            return resp;
        }
        std::string model() const override { return "mock"; }
        bool uses_network() const override { return false; }
    };

    Gateway gw(std::make_unique<ReverseProvider>());
    PromptTemplates templates;
    std::string prompt = "def f(x):\n    \"\"\"alpha beta gamma\"\"\"\n";
    auto out = mutate_llm(prompt, gw, templates, "t/rev");
    CHECK(out == "def f(x):\n    \"\"\"gamma beta alpha\"\"\"\n");
    CHECK(gw.ledger().size() == 1);
}
