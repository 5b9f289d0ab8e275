#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "epic/core.hpp"
#include "epic/engine.hpp"
#include "epic/errors.hpp"
#include "epic/rng.hpp"

namespace epic {

struct Dataset {
    std::string name;
    std::vector<Problem> problems;
    size_t size() const { return problems.size(); }
};

struct DatasetLoadReport {
    std::vector<std::string> errors;  // one message per rejected line
};

namespace detail {

inline std::optional<std::string> problem_from_json(const json& j, Problem& out) {
    if (!j.is_object()) return "line is not a JSON object";
    if (!j.contains("task_id") || !j["task_id"].is_string() || j["task_id"].get<std::string>().empty())
        return "missing or empty task_id";
    if (!j.contains("prompt") || !j["prompt"].is_string() || j["prompt"].get<std::string>().empty())
        return "missing or empty prompt";
    if (!j.contains("entry_point") || !j["entry_point"].is_string() ||
        j["entry_point"].get<std::string>().empty())
        return "missing or empty entry_point";
    out.id = j["task_id"].get<std::string>();
    out.prompt = j["prompt"].get<std::string>();
    out.entry_point = j["entry_point"].get<std::string>();
    if (!strings::contains_identifier(out.prompt, out.entry_point))
        return "entry_point '" + out.entry_point + "' does not occur in the prompt";
    out.reference_tests.clear();
    if (j.contains("reference_tests")) {
        if (!j["reference_tests"].is_array()) return "reference_tests is not an array";
        for (const auto& t : j["reference_tests"]) {
            if (!t.is_string()) return "reference_tests entries must be strings";
            out.reference_tests.push_back({t.get<std::string>(), true});
        }
    }
    return std::nullopt;
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

// One JSON object per line: {task_id, prompt, entry_point,
// reference_tests?}. Strict mode fails on the first malformed line or
// duplicate id; lenient mode collects the messages and keeps going.
inline Dataset load_dataset(const std::string& path, bool strict = true,
                            DatasetLoadReport* report = nullptr) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset: " + path);
    Dataset ds;
    ds.name = path;
    std::set<std::string> ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (strings::trim(line).empty()) continue;
        auto reject = [&](const std::string& why) {
            std::string msg = "line " + std::to_string(line_no) + ": " + why;
            if (strict) throw DatasetError(path + ": " + msg);
            if (report) report->errors.push_back(msg);
        };
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            reject("invalid JSON");
            continue;
        }
        Problem p;
        if (auto why = detail::problem_from_json(j, p)) {
            reject(*why);
            continue;
        }
        if (!ids.insert(p.id).second) {
            reject("duplicate task_id '" + p.id + "'");
            continue;
        }
        ds.problems.push_back(std::move(p));
    }
    if (ds.problems.empty()) throw DatasetError(path + ": no valid problems in dataset");
    return ds;
}

inline std::vector<RunRecord> load_runlog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run log: " + path);
    std::vector<RunRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (strings::trim(line).empty()) continue;
        records.push_back(json::parse(line).get<RunRecord>());
    }
    return records;
}

inline void write_runlog(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write run log: " + path);
    for (const auto& r : records) out << json(r).dump() << '\n';
}

namespace detail {
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::uint64_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);  // stays integral at every step
    return c;
}
}  // namespace detail

// Unbiased estimator: probability that at least one of k samples out of n,
// c of them correct, is correct. Exact integer combinatorics where they
// fit; overflow-safe product form beyond.
inline double pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
    if (c > n) throw Error("pass_at_k: need c <= n");
    if (k < 1 || k > n) throw Error("pass_at_k: need 1 <= k <= n");
    if (n - c < k) return 1.0;
    if (n <= 62)
        return 1.0 - static_cast<double>(detail::binomial(n - c, k)) /
                         static_cast<double>(detail::binomial(n, k));
    double prod = 1.0;
    for (std::uint64_t i = 0; i < k; ++i)
        prod *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
    return 1.0 - prod;
}

// Incremental token usage per additional solved problem, in the same token
// units as the inputs (thousands in the reports). Undefined when the
// method does not beat the baseline pass rate; rendered as an em dash.
inline std::optional<double> atsp(double tokens_method, double tokens_zero, double pass_method,
                                  double pass_zero, std::uint64_t dataset_size) {
    if (dataset_size == 0) throw Error("atsp: dataset size must be positive");
    if (pass_method <= pass_zero) return std::nullopt;
    return (tokens_method - tokens_zero) / ((pass_method - pass_zero) * static_cast<double>(dataset_size));
}

struct ProblemResult {
    std::string problem_id;
    bool solved = false;
    bool scored_by_reference = false;   // false: self-scored on the EA's own suite
    bool self_reference_discrepancy = false;  // EA suite passed, reference suite did not
};

inline void to_json(json& j, const ProblemResult& r) {
    j = json{{"problem_id", r.problem_id},
             {"solved", r.solved},
             {"scored_by_reference", r.scored_by_reference},
             {"self_reference_discrepancy", r.self_reference_discrepancy}};
}
inline void from_json(const json& j, ProblemResult& r) {
    j.at("problem_id").get_to(r.problem_id);
    j.at("solved").get_to(r.solved);
    j.at("scored_by_reference").get_to(r.scored_by_reference);
    j.at("self_reference_discrepancy").get_to(r.self_reference_discrepancy);
}

struct BaselineSummary {
    std::string name;
    double tokens_thousands = 0.0;
    double pass_rate = 0.0;

    static BaselineSummary from_runlog(const std::string& path) {
        auto records = load_runlog(path);
        if (records.empty()) throw Error("baseline run log is empty: " + path);
        BaselineSummary b;
        b.name = path;
        std::uint64_t tokens = 0, solved = 0;
        for (const auto& r : records) {
            tokens += r.tokens_in + r.tokens_out;
            if (r.solved) ++solved;
        }
        b.tokens_thousands = static_cast<double>(tokens) / 1000.0;
        b.pass_rate = static_cast<double>(solved) / static_cast<double>(records.size());
        return b;
    }
};

struct CampaignReport {
    std::string method = "epic";
    std::vector<RunRecord> records;
    std::vector<ProblemResult> per_problem;
    size_t dataset_size = 0;
    double pass_at_1 = 0.0;
    std::vector<std::pair<std::uint64_t, std::optional<double>>> pass_at_k_values;
    double total_tokens_thousands = 0.0;
    std::optional<double> total_cost;
    std::optional<double> atsp_value;
    std::string baseline_name;
};

inline void to_json(json& j, const CampaignReport& r) {
    json ks = json::array();
    for (const auto& [k, v] : r.pass_at_k_values)
        ks.push_back(json{{"k", k}, {"value", v ? json(*v) : json(nullptr)}});
    j = json{{"method", r.method},
             {"records", r.records},
             {"per_problem", r.per_problem},
             {"dataset_size", r.dataset_size},
             {"pass_at_1", r.pass_at_1},
             {"pass_at_k", ks},
             {"total_tokens_thousands", r.total_tokens_thousands},
             {"total_cost", r.total_cost ? json(*r.total_cost) : json(nullptr)},
             {"atsp", r.atsp_value ? json(*r.atsp_value) : json(nullptr)},
             {"baseline_name", r.baseline_name}};
}
inline void from_json(const json& j, CampaignReport& r) {
    j.at("method").get_to(r.method);
    j.at("records").get_to(r.records);
    j.at("per_problem").get_to(r.per_problem);
    j.at("dataset_size").get_to(r.dataset_size);
    j.at("pass_at_1").get_to(r.pass_at_1);
    r.pass_at_k_values.clear();
    for (const auto& e : j.at("pass_at_k")) {
        std::optional<double> v;
        if (!e.at("value").is_null()) v = e.at("value").get<double>();
        r.pass_at_k_values.emplace_back(e.at("k").get<std::uint64_t>(), v);
    }
    j.at("total_tokens_thousands").get_to(r.total_tokens_thousands);
    if (!j.at("total_cost").is_null()) r.total_cost = j.at("total_cost").get<double>();
    if (!j.at("atsp").is_null()) r.atsp_value = j.at("atsp").get<double>();
    j.at("baseline_name").get_to(r.baseline_name);
}

struct CampaignOptions {
    int jobs = 4;
    std::vector<std::uint64_t> k_list{1};
    std::optional<BaselineSummary> baseline;
    std::optional<double> total_cost;  // filled by the caller from the ledger + pricing
};

namespace detail {

// Reference scoring: the held-out suite decides `solved` whenever it
// exists; otherwise the record's own (self-scored) verdict stands.
inline ProblemResult score_record(const Problem& problem, const RunRecord& record,
                                  const Sandbox& sandbox) {
    ProblemResult result;
    result.problem_id = problem.id;
    if (problem.reference_tests.empty()) {
        result.solved = record.solved;
        result.scored_by_reference = false;
        return result;
    }
    result.scored_by_reference = true;
    bool all_pass = false;
    if (!record.final_code.empty()) {
        auto outcomes = sandbox.run_suite(record.final_code, problem.reference_tests);
        all_pass = !outcomes.empty();
        for (auto o : outcomes) all_pass = all_pass && o == TestOutcome::pass;
    }
    result.solved = all_pass;
    result.self_reference_discrepancy = record.solved && !all_pass;
    return result;
}

}  // namespace detail

// Evolves every problem in the dataset (bounded parallelism), scores the
// results against the reference tests when present, and assembles the
// aggregate metrics. Individual problem failures become error records and
// never abort the campaign.
inline CampaignReport run_campaign(const Dataset& dataset, const EngineConfig& cfg, EngineContext& ctx,
                                   const CampaignOptions& options = {}) {
    if (dataset.problems.empty()) throw DatasetError("empty dataset");
    cfg.validate();

    std::vector<RunRecord> records(dataset.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= dataset.size()) return;
            const auto& problem = dataset.problems[i];
            EngineConfig per_problem = cfg;
            per_problem.rng_seed = Rng::derive(cfg.rng_seed, detail::fnv1a(problem.id));
            try {
                records[i] = evolve(problem, per_problem, ctx);
            } catch (const std::exception& e) {
                RunRecord rec;
                rec.problem_id = problem.id;
                rec.final_fitness = {0, 1};
                rec.rng_seed = per_problem.rng_seed;
                rec.error = e.what();
                records[i] = std::move(rec);
            }
        }
    };
    size_t n_workers = std::clamp<size_t>(options.jobs, 1, dataset.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    CampaignReport report;
    report.records = std::move(records);
    report.dataset_size = dataset.size();
    std::uint64_t solved = 0, tokens = 0;
    for (size_t i = 0; i < dataset.size(); ++i) {
        auto result = detail::score_record(dataset.problems[i], report.records[i], ctx.sandbox);
        solved += result.solved ? 1 : 0;
        tokens += report.records[i].tokens_in + report.records[i].tokens_out;
        report.per_problem.push_back(std::move(result));
    }
    report.pass_at_1 = static_cast<double>(solved) / static_cast<double>(dataset.size());
    report.total_tokens_thousands = static_cast<double>(tokens) / 1000.0;
    report.total_cost = options.total_cost;

    // one sample per problem: pass@k beyond k=1 is undefined here
    for (auto k : options.k_list)
        report.pass_at_k_values.emplace_back(
            k, k == 1 ? std::optional<double>(report.pass_at_1) : std::nullopt);

    if (options.baseline) {
        report.baseline_name = options.baseline->name;
        report.atsp_value = atsp(report.total_tokens_thousands, options.baseline->tokens_thousands,
                                 report.pass_at_1, options.baseline->pass_rate, dataset.size());
    }
    return report;
}

// Zero-shot baseline: one code-generation call per problem from the
// original prompt, no iteration, scored on the reference tests.
inline std::vector<RunRecord> run_zero_shot(const Dataset& dataset, Gateway& gateway,
                                            const Sandbox& sandbox, const PromptTemplates& templates,
                                            int jobs = 4) {
    if (dataset.problems.empty()) throw DatasetError("empty dataset");
    std::vector<RunRecord> records(dataset.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= dataset.size()) return;
            const auto& problem = dataset.problems[i];
            RunRecord rec;
            rec.problem_id = problem.id;
            rec.phase_reached = Phase::IE;
            rec.final_fitness = {0, 1};
            auto t0 = std::chrono::steady_clock::now();
            try {
                CompletionRequest req;
                req.system_text = templates.code_generation;
                req.user_text = problem.prompt;
                req.temperature = kTemperatureCodeGeneration;
                req.tag = problem.id + "/zero-shot";
                auto resp = gateway.complete(req);
                rec.final_code = extract_code_block(resp.text);
                rec.tokens_in = resp.tokens_in;
                rec.tokens_out = resp.tokens_out;
                if (!problem.reference_tests.empty()) {
                    auto outcomes = sandbox.run_suite(rec.final_code, problem.reference_tests);
                    std::vector<bool> ok;
                    for (auto o : outcomes) ok.push_back(o == TestOutcome::pass);
                    rec.final_fitness = pass_rate(ok);
                    rec.solved = rec.final_fitness.perfect();
                }
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
            rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            records[i] = std::move(rec);
        }
    };
    size_t n_workers = std::clamp<size_t>(jobs, 1, dataset.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

enum class ReportFormat { json, csv, markdown_table };

inline ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "markdown-table") return ReportFormat::markdown_table;
    throw ConfigError("unknown report format: " + s + " (want json, csv, or markdown-table)");
}

namespace detail {

struct ReportRow {
    std::string method;
    std::string tokens;
    std::string cost;
    std::string pass1;
    std::string atsp;
};

inline std::string fmt_double(double v, int decimals) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(decimals);
    os << v;
    return os.str();
}

// Rounding rules: tokens to integer thousands, cost to cents, pass@1 to
// three decimals, ATSP to an integer (em dash when undefined).
inline std::vector<ReportRow> report_rows(const CampaignReport& report,
                                          const std::optional<BaselineSummary>& baseline) {
    std::vector<ReportRow> rows;
    if (report.records.empty() && report.dataset_size == 0) return rows;  // header-only
    ReportRow main;
    main.method = report.method;
    main.tokens = std::to_string(static_cast<long long>(std::llround(report.total_tokens_thousands)));
    main.cost = report.total_cost ? fmt_double(*report.total_cost, 2) : "—";
    main.pass1 = fmt_double(report.pass_at_1, 3);
    main.atsp = report.atsp_value
                    ? std::to_string(static_cast<long long>(std::llround(*report.atsp_value)))
                    : "—";
    rows.push_back(std::move(main));
    if (baseline) {
        ReportRow b;
        b.method = "zero-shot";
        b.tokens = std::to_string(static_cast<long long>(std::llround(baseline->tokens_thousands)));
        b.cost = "—";
        b.pass1 = fmt_double(baseline->pass_rate, 3);
        b.atsp = "—";
        rows.push_back(std::move(b));
    }
    return rows;
}

}  // namespace detail

// Renders the Method / Token usage / Cost / Pass@1 / ATSP table (or the
// full JSON document, which round-trips back into a CampaignReport).
inline std::string render_report(const CampaignReport& report, ReportFormat format,
                                 const std::optional<BaselineSummary>& baseline = std::nullopt) {
    if (format == ReportFormat::json) return json(report).dump(2) + "\n";
    auto rows = detail::report_rows(report, baseline);
    std::ostringstream out;
    if (format == ReportFormat::csv) {
        out << "Method,Token usage (thousand tokens),Cost ($),Pass@1,ATSP\n";
        for (const auto& r : rows)
            out << r.method << ',' << r.tokens << ',' << r.cost << ',' << r.pass1 << ',' << r.atsp << '\n';
    } else {
        out << "| Method | Token usage (thousand tokens) | Cost ($) | Pass@1 | ATSP |\n";
        out << "| --- | --- | --- | --- | --- |\n";
        for (const auto& r : rows)
            out << "| " << r.method << " | " << r.tokens << " | " << r.cost << " | " << r.pass1 << " | "
                << r.atsp << " |\n";
    }
    return out.str();
}

inline void write_report(const std::string& path, const CampaignReport& report, ReportFormat format,
                         const std::optional<BaselineSummary>& baseline = std::nullopt) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report: " + path);
    out << render_report(report, format, baseline);
}

}  // namespace epic
