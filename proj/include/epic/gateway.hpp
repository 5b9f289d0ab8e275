#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "epic/core.hpp"
#include "epic/errors.hpp"
#include "epic/strings.hpp"

namespace epic {

struct CompletionRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    std::uint32_t max_output_tokens = 2048;
    std::string tag;  // attribution label: "<problem-id>/<purpose>"
};

struct CompletionResponse {
    std::string text;
    std::uint64_t tokens_in = 0;
    std::uint64_t tokens_out = 0;
    std::string provider;
    double latency = 0.0;  // seconds
};

struct LedgerEntry {
    std::string tag;
    std::string model;
    std::uint64_t tokens_in = 0;
    std::uint64_t tokens_out = 0;
};

inline void to_json(json& j, const LedgerEntry& e) {
    j = json{{"tag", e.tag}, {"model", e.model}, {"tokens_in", e.tokens_in}, {"tokens_out", e.tokens_out}};
}

struct TokenTotals {
    std::uint64_t tokens_in = 0;
    std::uint64_t tokens_out = 0;
    std::uint64_t sum() const { return tokens_in + tokens_out; }
};

// Append-only record of every completion's token counts. Entries are never
// edited or removed; totals are therefore non-decreasing over a run.
class TokenLedger {
public:
    void append(LedgerEntry entry) {
        std::lock_guard lock(mutex_);
        entries_.push_back(std::move(entry));
    }

    std::vector<LedgerEntry> entries() const {
        std::lock_guard lock(mutex_);
        return entries_;
    }

    size_t size() const {
        std::lock_guard lock(mutex_);
        return entries_.size();
    }

    TokenTotals totals() const {
        std::lock_guard lock(mutex_);
        TokenTotals t;
        for (const auto& e : entries_) {
            t.tokens_in += e.tokens_in;
            t.tokens_out += e.tokens_out;
        }
        return t;
    }

    TokenTotals totals_for_tag_prefix(const std::string& prefix) const {
        std::lock_guard lock(mutex_);
        TokenTotals t;
        for (const auto& e : entries_) {
            if (strings::starts_with(e.tag, prefix)) {
                t.tokens_in += e.tokens_in;
                t.tokens_out += e.tokens_out;
            }
        }
        return t;
    }

    void write_jsonl(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw Error("cannot write ledger: " + path);
        for (const auto& e : entries()) out << json(e).dump() << '\n';
    }

private:
    mutable std::mutex mutex_;
    std::vector<LedgerEntry> entries_;
};

// Per-model input/output prices in dollars per million tokens.
class PricingTable {
public:
    struct ModelPrice {
        double in_per_m = 0.0;
        double out_per_m = 0.0;
    };

    void set(const std::string& model, double in_per_m, double out_per_m) {
        if (in_per_m < 0 || out_per_m < 0) throw PricingError("prices must be >= 0");
        prices_[model] = {in_per_m, out_per_m};
    }

    const ModelPrice& lookup(const std::string& model) const {
        auto it = prices_.find(model);
        if (it == prices_.end()) throw PricingError("no pricing for model: " + model);
        return it->second;
    }

    // JSON: {"model": {"in_per_m": 1.1, "out_per_m": 4.4}, ...}
    static PricingTable load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw PricingError("cannot open pricing file: " + path);
        json j = json::parse(in, nullptr, true, true);
        PricingTable t;
        for (auto& [model, p] : j.items())
            t.set(model, p.at("in_per_m").get<double>(), p.at("out_per_m").get<double>());
        return t;
    }

private:
    std::map<std::string, ModelPrice> prices_;
};

inline double ledger_cost(const TokenLedger& ledger, const PricingTable& prices) {
    double dollars = 0.0;
    for (const auto& e : ledger.entries()) {
        const auto& p = prices.lookup(e.model);
        dollars += (static_cast<double>(e.tokens_in) * p.in_per_m +
                    static_cast<double>(e.tokens_out) * p.out_per_m) /
                   1e6;
    }
    return dollars;
}

class Provider {
public:
    virtual ~Provider() = default;
    virtual CompletionResponse complete(const CompletionRequest& req) = 0;
    virtual std::string model() const = 0;
    virtual bool uses_network() const = 0;
};

// Deterministic scripted provider: identical requests always produce the
// identical response. Token counts use a whitespace-token model
// (count x factor), documented as approximate.
class MockProvider : public Provider {
public:
    // Generator-style rules: static_response replays `response`; echo_user
    // replays the request's user text (handy as an identity rewrite).
    enum class Behavior { static_response, echo_user };

    struct Rule {
        std::optional<std::string> user_equals;
        std::optional<std::string> user_contains;
        std::vector<std::string> user_contains_all;  // every needle must appear
        std::optional<std::string> system_contains;
        std::optional<std::string> tag_contains;
        std::string response;
        Behavior behavior = Behavior::static_response;

        bool matches(const CompletionRequest& req) const {
            if (user_equals && req.user_text != *user_equals) return false;
            if (user_contains && !strings::contains(req.user_text, *user_contains)) return false;
            for (const auto& needle : user_contains_all)
                if (!strings::contains(req.user_text, needle)) return false;
            if (system_contains && !strings::contains(req.system_text, *system_contains)) return false;
            if (tag_contains && !strings::contains(req.tag, *tag_contains)) return false;
            return true;
        }
    };

    MockProvider& add_rule(Rule rule) {
        rules_.push_back(std::move(rule));
        return *this;
    }
    MockProvider& set_default(std::string response) {
        default_response_ = std::move(response);
        return *this;
    }
    MockProvider& set_strict(bool strict) {
        strict_ = strict;
        return *this;
    }
    MockProvider& set_token_factor(double f) {
        token_factor_ = f;
        return *this;
    }
    MockProvider& set_model(std::string m) {
        model_ = std::move(m);
        return *this;
    }

    static MockProvider from_json_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open mock script: " + path);
        json j = json::parse(in, nullptr, true, true);
        MockProvider p;
        if (j.contains("strict")) p.strict_ = j["strict"].get<bool>();
        if (j.contains("token_factor")) p.token_factor_ = j["token_factor"].get<double>();
        if (j.contains("model")) p.model_ = j["model"].get<std::string>();
        if (j.contains("default_response")) p.default_response_ = j["default_response"].get<std::string>();
        for (const auto& rj : j.value("rules", json::array())) {
            Rule r;
            if (rj.contains("user_equals")) r.user_equals = rj["user_equals"].get<std::string>();
            if (rj.contains("user_contains")) r.user_contains = rj["user_contains"].get<std::string>();
            if (rj.contains("user_contains_all"))
                r.user_contains_all = rj["user_contains_all"].get<std::vector<std::string>>();
            if (rj.contains("system_contains")) r.system_contains = rj["system_contains"].get<std::string>();
            if (rj.contains("tag_contains")) r.tag_contains = rj["tag_contains"].get<std::string>();
            if (rj.value("behavior", "") == "echo_user") r.behavior = Behavior::echo_user;
            if (rj.contains("response"))
                r.response = rj["response"].get<std::string>();
            else if (r.behavior == Behavior::static_response)
                throw ConfigError("mock rule needs a response or a behavior");
            p.rules_.push_back(std::move(r));
        }
        return p;
    }

    CompletionResponse complete(const CompletionRequest& req) override {
        const std::string* text = nullptr;
        std::string generated;
        for (const auto& rule : rules_) {
            if (rule.matches(req)) {
                if (rule.behavior == Behavior::echo_user) {
                    generated = req.user_text;
                    text = &generated;
                } else {
                    text = &rule.response;
                }
                break;
            }
        }
        if (!text) {
            if (strict_ || !default_response_)
                throw MockMissError("mock provider has no rule for request tagged '" + req.tag + "'");
            text = &*default_response_;
        }
        CompletionResponse resp;
        resp.text = *text;
        resp.tokens_in = static_cast<std::uint64_t>(
            token_factor_ * static_cast<double>(strings::count_ws_tokens(req.system_text) +
                                                strings::count_ws_tokens(req.user_text)));
        resp.tokens_out =
            static_cast<std::uint64_t>(token_factor_ * static_cast<double>(strings::count_ws_tokens(*text)));
        resp.provider = "mock";
        return resp;
    }

    std::string model() const override { return model_; }
    bool uses_network() const override { return false; }

private:
    std::vector<Rule> rules_;
    std::optional<std::string> default_response_;
    bool strict_ = false;
    double token_factor_ = 1.0;
    std::string model_ = "mock";
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{1000};
    double multiplier = 2.0;
};

struct GatewayConfig {
    RetryPolicy retry;
    int max_in_flight = 4;
    bool forbid_network = false;  // test mode: any real socket attempt is a hard failure
};

// The single chokepoint for LLM access: every completion in the system goes
// through complete(), which enforces the request invariants, retries
// transient failures with exponential backoff, and records token usage in
// the ledger before returning.
class Gateway {
public:
    explicit Gateway(std::unique_ptr<Provider> provider, GatewayConfig config = {})
        : provider_(std::move(provider)),
          config_(config),
          in_flight_(config.max_in_flight > 0 ? config.max_in_flight : 1) {}

    CompletionResponse complete(const CompletionRequest& req) {
        if (req.user_text.empty()) throw Error("completion request must have non-empty user text");
        if (req.temperature < 0.0 || req.temperature > 2.0)
            throw Error("completion temperature must be in [0, 2]");
        if (config_.forbid_network && provider_->uses_network())
            throw GatewayError("network access is forbidden in test mode");

        auto backoff = config_.retry.base_backoff;
        std::string last_error;
        for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
            try {
                auto t0 = std::chrono::steady_clock::now();
                in_flight_.acquire();
                CompletionResponse resp;
                try {
                    resp = provider_->complete(req);
                } catch (...) {
                    in_flight_.release();
                    throw;
                }
                in_flight_.release();
                resp.latency = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                ledger_.append({req.tag, provider_->model(), resp.tokens_in, resp.tokens_out});
                return resp;
            } catch (const RequestRejectedError&) {
                throw;
            } catch (const MockMissError&) {
                throw;
            } catch (const MalformedResponseError&) {
                throw;
            } catch (const GatewayError& e) {
                last_error = e.what();
                if (attempt == config_.retry.max_attempts) break;
                std::this_thread::sleep_for(backoff);
                backoff = std::chrono::milliseconds(
                    static_cast<long long>(static_cast<double>(backoff.count()) * config_.retry.multiplier));
            }
        }
        throw GatewayError("gateway unavailable after " + std::to_string(config_.retry.max_attempts) +
                           " attempts: " + last_error);
    }

    TokenLedger& ledger() { return ledger_; }
    const TokenLedger& ledger() const { return ledger_; }
    const Provider& provider() const { return *provider_; }

private:
    std::unique_ptr<Provider> provider_;
    GatewayConfig config_;
    TokenLedger ledger_;
    std::counting_semaphore<256> in_flight_;
};

// The four instruction templates sent as system text. Overridable from a
// JSON file keyed by template name.
struct PromptTemplates {
    std::string test_generation =
        R"(You are an AI coding assistant who can write unique, diverse, and intuitive unit tests for functions, given the signature and docstring. Use step-by-step reasoning to validate each test case separately to ensure that all of them have the correct expected output. Write the final validated tests inside $$$$ tags.

Examples:
def add3Numbers(x, y, z):
    """ Add three numbers together. This function takes three numbers as input and returns the sum of the three numbers."""
$$$$
assert add3Numbers(1, 2, 3) == 6
assert add3Numbers(-1, 2, 3) == 4
assert add3Numbers(1, -2, 3) == 2
assert add3Numbers(1, 2, -3) == 0
assert add3Numbers(-3, -2, -1) == -6
assert add3Numbers(0, 0, 0) == 0
$$$$)";

    std::string code_generation =
        "You are a Python developer who implements the correct code based on the function description "
        "provided. You are given one or more functions to implement. Do not delete import statements "
        "from the code snippet. Use at most 1000 words.";

    std::string rewrite =
        R"(Please rewrite the function description following the instructions:
1- Add input and output types of the function to the description.
2- Elaborate the description so that it is understandable for large language models.
3- Keep the original test cases and add three test cases to the description to cover the edge cases. Do not separate the generated test cases and the original ones.
4- Keep the structure of the function and add the description as a comment in the function. Use at most 500 words.)";

    std::string mutation =
        R"(You are a mutation tool. This is a Python function and its description. Please change the description by enhancing its clarity and comprehensibility for sophisticated language models.
Please put the changed description between #Explanation and #End. Use at most 600 words.)";

    void load_overrides(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open prompt-template file: " + path);
        json j = json::parse(in, nullptr, true, true);
        if (j.contains("test_generation")) test_generation = j["test_generation"].get<std::string>();
        if (j.contains("code_generation")) code_generation = j["code_generation"].get<std::string>();
        if (j.contains("rewrite")) rewrite = j["rewrite"].get<std::string>();
        if (j.contains("mutation")) mutation = j["mutation"].get<std::string>();
    }
};

// Sampling temperatures: 0.6 for population building (creative rewrites);
// deterministic zero elsewhere.
inline constexpr double kTemperaturePopulationBuild = 0.6;
inline constexpr double kTemperatureCodeGeneration = 0.0;
inline constexpr double kTemperatureTestGeneration = 0.0;
inline constexpr double kTemperatureLlmMutation = 0.0;

}  // namespace epic
