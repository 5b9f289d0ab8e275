// epic: evolutionary prompt optimization for LLM code generation.
//
//   epic solve  --problem task.json  --mock mock.json --out out/
//   epic bench  --dataset tasks.jsonl --jobs 4 --k 1,5 --baseline zs.jsonl --out report.csv
//   epic report --from runlog.jsonl --format markdown-table
//
// Provider selection: --mock <script.json> for the offline provider, else
// EPIC_API_BASE / EPIC_API_KEY / EPIC_MODEL for a chat-completions endpoint.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epic/epic.hpp"
#include "epic/http_provider.hpp"

namespace fs = std::filesystem;

namespace {

struct ProviderOptions {
    std::string mock_script;
    std::string pricing_file;
    std::string templates_file;
    int max_in_flight = 4;
    bool forbid_network = false;
};

struct LexiconOptions {
    std::string embeddings;
    std::string synonyms;
    std::string stopwords;
    std::string lemma_exceptions;
};

struct SandboxOptions {
    std::string interpreter = "python3";
    double test_timeout_secs = 10.0;
    unsigned max_exec_workers = 0;
};

struct EngineOptions {
    int pop_size = 5;
    int max_gens = 5;
    int patience = 2;
    std::uint64_t seed = 0;
    std::string mutator = "similar-words";
    double sim_t = 0.5;
    std::size_t num_t = 10;
    double mutation_prob = 0.3;
};

void add_provider_options(CLI::App* cmd, ProviderOptions& opts) {
    cmd->add_option("--mock", opts.mock_script, "Mock provider script (JSON); omit to use EPIC_API_* env");
    cmd->add_option("--pricing", opts.pricing_file, "Pricing table JSON {model: {in_per_m, out_per_m}}");
    cmd->add_option("--templates", opts.templates_file, "Prompt template overrides (JSON)");
    cmd->add_option("--max-in-flight", opts.max_in_flight, "Max concurrent provider calls")
        ->capture_default_str();
    cmd->add_flag("--forbid-network", opts.forbid_network,
                  "Fail hard on any real network provider (test mode)");
}

void add_lexicon_options(CLI::App* cmd, LexiconOptions& opts) {
    cmd->add_option("--embeddings", opts.embeddings, "Word vectors, text format: '<count> <dim>' header");
    cmd->add_option("--synonyms", opts.synonyms, "Synonym table TSV: lemma<TAB>syn1,syn2,...");
    cmd->add_option("--stopwords", opts.stopwords, "Stop-word list, one word per line (bundled default)");
    cmd->add_option("--lemma-exceptions", opts.lemma_exceptions, "Irregular-form table TSV");
}

void add_sandbox_options(CLI::App* cmd, SandboxOptions& opts) {
    cmd->add_option("--interpreter", opts.interpreter, "Target-language interpreter")
        ->capture_default_str();
    cmd->add_option("--test-timeout-secs", opts.test_timeout_secs, "Per-test wall-clock timeout")
        ->capture_default_str();
    cmd->add_option("--max-exec-workers", opts.max_exec_workers,
                    "Concurrent test subprocesses (0: CPU count)");
}

void add_engine_options(CLI::App* cmd, EngineOptions& opts) {
    cmd->add_option("--pop-size", opts.pop_size, "Population size")->capture_default_str();
    cmd->add_option("--max-gens", opts.max_gens, "Maximum generations")->capture_default_str();
    cmd->add_option("--patience", opts.patience, "Generations without improvement before stopping")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Run seed")->capture_default_str();
    cmd->add_option("--mutator", opts.mutator, "similar-words | llm")->capture_default_str();
    cmd->add_option("--sim-t", opts.sim_t, "Minimum cosine similarity for related words")
        ->capture_default_str();
    cmd->add_option("--num-t", opts.num_t, "Maximum related words per token")->capture_default_str();
    cmd->add_option("--mutation-prob", opts.mutation_prob, "Per-token mutation probability")
        ->capture_default_str();
}

std::unique_ptr<epic::Provider> make_provider(const ProviderOptions& opts) {
    if (!opts.mock_script.empty())
        return std::make_unique<epic::MockProvider>(epic::MockProvider::from_json_file(opts.mock_script));
    return std::make_unique<epic::HttpProvider>(epic::HttpProvider::from_env());
}

epic::Gateway make_gateway(const ProviderOptions& opts) {
    epic::GatewayConfig cfg;
    cfg.max_in_flight = opts.max_in_flight;
    cfg.forbid_network = opts.forbid_network;
    return epic::Gateway(make_provider(opts), cfg);
}

epic::Lexicon make_lexicon(const LexiconOptions& opts) {
    return epic::Lexicon::load({opts.embeddings, opts.synonyms, opts.stopwords, opts.lemma_exceptions});
}

epic::Sandbox make_sandbox(const SandboxOptions& opts) {
    epic::SandboxConfig cfg;
    cfg.interpreter = opts.interpreter;
    cfg.test_timeout_secs = opts.test_timeout_secs;
    cfg.max_exec_workers = opts.max_exec_workers;
    return epic::Sandbox(cfg);
}

epic::EngineConfig make_engine_config(const EngineOptions& opts) {
    epic::EngineConfig cfg;
    cfg.pop_size = opts.pop_size;
    cfg.max_generations = opts.max_gens;
    cfg.patience = opts.patience;
    cfg.rng_seed = opts.seed;
    cfg.mutation.sim_t = opts.sim_t;
    cfg.mutation.num_t = opts.num_t;
    cfg.mutation.mutation_probability = opts.mutation_prob;
    if (opts.mutator == "similar-words")
        cfg.mutation.mutator_kind = epic::MutatorKind::similar_words;
    else if (opts.mutator == "llm")
        cfg.mutation.mutator_kind = epic::MutatorKind::llm;
    else
        throw epic::ConfigError("unknown mutator: " + opts.mutator);
    cfg.validate();
    return cfg;
}

epic::PromptTemplates make_templates(const ProviderOptions& opts) {
    epic::PromptTemplates t;
    if (!opts.templates_file.empty()) t.load_overrides(opts.templates_file);
    return t;
}

epic::Problem load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw epic::DatasetError("cannot open problem file: " + path);
    std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    epic::json j = epic::json::parse(content, nullptr, false);
    if (j.is_discarded()) {
        // JSONL: take the first non-empty line
        for (const auto& line : epic::strings::split(content, '\n')) {
            if (epic::strings::trim(line).empty()) continue;
            j = epic::json::parse(line);
            break;
        }
    }
    epic::Problem p;
    if (auto why = epic::detail::problem_from_json(j, p))
        throw epic::DatasetError(path + ": " + *why);
    return p;
}

std::vector<std::uint64_t> parse_k_list(const std::string& arg) {
    std::vector<std::uint64_t> ks;
    for (const auto& part : epic::strings::split(arg, ','))
        if (!epic::strings::trim(part).empty()) ks.push_back(std::stoull(std::string(epic::strings::trim(part))));
    if (ks.empty()) ks.push_back(1);
    return ks;
}

std::optional<double> cost_from_ledger(const epic::Gateway& gateway, const ProviderOptions& opts) {
    if (opts.pricing_file.empty()) return std::nullopt;
    auto pricing = epic::PricingTable::load(opts.pricing_file);
    return epic::ledger_cost(gateway.ledger(), pricing);
}

int cmd_solve(const std::string& problem_file, const std::string& out_dir, const EngineOptions& eng,
              const ProviderOptions& prov, const LexiconOptions& lex, const SandboxOptions& sbx) {
    auto problem = load_problem_file(problem_file);
    auto cfg = make_engine_config(eng);
    auto gateway = make_gateway(prov);
    auto lexicon = make_lexicon(lex);
    auto sandbox = make_sandbox(sbx);
    auto templates = make_templates(prov);
    epic::SandboxPromptEvaluator evaluator(sandbox, templates);
    epic::EngineContext ctx{gateway, evaluator, sandbox, lexicon, templates};

    auto record = epic::evolve(problem, cfg, ctx);

    fs::create_directories(out_dir);
    {
        std::ofstream log(fs::path(out_dir) / "runlog.jsonl", std::ios::app);
        log << epic::json(record).dump() << '\n';
    }
    std::string solution_name = problem.id;
    for (auto& ch : solution_name)
        if (ch == '/' || ch == '\\') ch = '_';
    std::ofstream sol(fs::path(out_dir) / (solution_name + ".py"));
    sol << record.final_code;
    gateway.ledger().write_jsonl((fs::path(out_dir) / "ledger.jsonl").string());

    std::cout << problem.id << ": " << (record.solved ? "solved" : "not solved") << ", fitness "
              << record.final_fitness.passed << "/" << record.final_fitness.total << ", "
              << record.generations.size() << " generation(s), " << (record.tokens_in + record.tokens_out)
              << " tokens";
    if (auto cost = cost_from_ledger(gateway, prov)) std::cout << ", $" << *cost;
    std::cout << '\n';
    if (!record.error.empty()) {
        std::cerr << "error: " << record.error << '\n';
        return 2;
    }
    return record.solved ? 0 : 1;
}

int cmd_bench(const std::string& dataset_file, const std::string& out_file, const std::string& format,
              const std::string& runlog_file, const std::string& baseline_file, int jobs,
              const std::string& k_arg, bool zero_shot, bool lenient, const EngineOptions& eng,
              const ProviderOptions& prov, const LexiconOptions& lex, const SandboxOptions& sbx) {
    epic::DatasetLoadReport load_report;
    auto dataset = epic::load_dataset(dataset_file, !lenient, &load_report);
    for (const auto& e : load_report.errors) std::cerr << "dataset: skipped " << e << '\n';

    auto gateway = make_gateway(prov);
    auto sandbox = make_sandbox(sbx);
    auto templates = make_templates(prov);

    auto ledger_path_beside = [](const std::string& runlog) {
        return (fs::path(runlog).parent_path() / "ledger.jsonl").string();
    };

    if (zero_shot) {
        auto records = epic::run_zero_shot(dataset, gateway, sandbox, templates, jobs);
        std::uint64_t solved = 0;
        for (const auto& r : records) solved += r.solved ? 1 : 0;
        std::string runlog = runlog_file.empty() ? "zero-shot.jsonl" : runlog_file;
        epic::write_runlog(runlog, records);
        gateway.ledger().write_jsonl(ledger_path_beside(runlog));
        std::cout << "zero-shot: " << solved << "/" << records.size() << " solved, pass@1 "
                  << static_cast<double>(solved) / static_cast<double>(records.size()) << '\n';
        return 0;
    }

    auto cfg = make_engine_config(eng);
    auto lexicon = make_lexicon(lex);
    epic::SandboxPromptEvaluator evaluator(sandbox, templates);
    epic::EngineContext ctx{gateway, evaluator, sandbox, lexicon, templates};

    epic::CampaignOptions options;
    options.jobs = jobs;
    options.k_list = parse_k_list(k_arg);
    std::optional<epic::BaselineSummary> baseline;
    if (!baseline_file.empty()) {
        baseline = epic::BaselineSummary::from_runlog(baseline_file);
        options.baseline = baseline;
    }

    auto report = epic::run_campaign(dataset, cfg, ctx, options);
    report.total_cost = cost_from_ledger(gateway, prov);

    if (!runlog_file.empty()) {
        epic::write_runlog(runlog_file, report.records);
        gateway.ledger().write_jsonl(ledger_path_beside(runlog_file));
    }
    auto fmt = format.empty() ? (out_file.ends_with(".json")  ? epic::ReportFormat::json
                                 : out_file.ends_with(".md")  ? epic::ReportFormat::markdown_table
                                                              : epic::ReportFormat::csv)
                              : epic::report_format_from_string(format);
    epic::write_report(out_file, report, fmt, baseline);

    std::cout << "pass@1 " << report.pass_at_1 << ", tokens " << report.total_tokens_thousands
              << "k, ATSP " << (report.atsp_value ? std::to_string(*report.atsp_value) : "—") << '\n';
    std::uint64_t flagged = 0;
    for (const auto& p : report.per_problem) flagged += p.self_reference_discrepancy ? 1 : 0;
    if (flagged) std::cout << flagged << " problem(s) passed their own suite but failed the reference\n";
    return 0;
}

int cmd_report(const std::string& from_file, const std::string& format, const std::string& out_file,
               const std::string& baseline_file, const std::string& method) {
    auto records = epic::load_runlog(from_file);
    if (records.empty()) throw epic::Error("run log is empty: " + from_file);
    epic::CampaignReport report;
    report.method = method;
    report.dataset_size = records.size();
    std::uint64_t solved = 0, tokens = 0;
    for (const auto& r : records) {
        solved += r.solved ? 1 : 0;
        tokens += r.tokens_in + r.tokens_out;
        epic::ProblemResult pr;
        pr.problem_id = r.problem_id;
        pr.solved = r.solved;
        report.per_problem.push_back(std::move(pr));
    }
    report.records = std::move(records);
    report.pass_at_1 = static_cast<double>(solved) / static_cast<double>(report.dataset_size);
    report.pass_at_k_values.emplace_back(1, report.pass_at_1);
    report.total_tokens_thousands = static_cast<double>(tokens) / 1000.0;

    std::optional<epic::BaselineSummary> baseline;
    if (!baseline_file.empty()) {
        baseline = epic::BaselineSummary::from_runlog(baseline_file);
        report.baseline_name = baseline->name;
        report.atsp_value = epic::atsp(report.total_tokens_thousands, baseline->tokens_thousands,
                                       report.pass_at_1, baseline->pass_rate, report.dataset_size);
    }

    auto fmt = epic::report_format_from_string(format);
    if (out_file.empty())
        std::cout << epic::render_report(report, fmt, baseline);
    else
        epic::write_report(out_file, report, fmt, baseline);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolutionary prompt optimization for LLM code generation"};
    app.require_subcommand(1);

    ProviderOptions prov;
    LexiconOptions lex;
    SandboxOptions sbx;
    EngineOptions eng;

    auto* solve = app.add_subcommand("solve", "Optimize a single problem");
    std::string problem_file, solve_out = "epic-out";
    solve->add_option("--problem", problem_file, "Problem file (JSON object or JSONL)")->required();
    solve->add_option("--out", solve_out, "Output directory")->capture_default_str();
    add_engine_options(solve, eng);
    add_provider_options(solve, prov);
    add_lexicon_options(solve, lex);
    add_sandbox_options(solve, sbx);

    auto* bench = app.add_subcommand("bench", "Run a campaign over a dataset");
    std::string dataset_file, bench_out = "report.csv", bench_format, bench_runlog, baseline_file;
    std::string k_arg = "1";
    int jobs = 4;
    bool zero_shot = false, lenient = false;
    bench->add_option("--dataset", dataset_file, "Dataset JSONL")->required();
    bench->add_option("--out", bench_out, "Report file")->capture_default_str();
    bench->add_option("--format", bench_format, "json | csv | markdown-table (default: by extension)");
    bench->add_option("--runlog", bench_runlog, "Write per-problem records here (JSONL)");
    bench->add_option("--baseline", baseline_file, "Zero-shot baseline run log (JSONL) for ATSP");
    bench->add_option("--jobs", jobs, "Concurrent problems")->capture_default_str();
    bench->add_option("--k", k_arg, "pass@k list, e.g. 1,5")->capture_default_str();
    bench->add_flag("--zero-shot", zero_shot, "Single-call baseline instead of the evolutionary run");
    bench->add_flag("--lenient", lenient, "Skip malformed dataset lines instead of failing");
    add_engine_options(bench, eng);
    add_provider_options(bench, prov);
    add_lexicon_options(bench, lex);
    add_sandbox_options(bench, sbx);

    auto* report = app.add_subcommand("report", "Render a report from a run log");
    std::string from_file, report_format = "markdown-table", report_out, report_baseline;
    std::string method = "epic";
    report->add_option("--from", from_file, "Run log JSONL")->required();
    report->add_option("--format", report_format, "json | csv | markdown-table")->capture_default_str();
    report->add_option("--out", report_out, "Output file (default: stdout)");
    report->add_option("--baseline", report_baseline, "Zero-shot baseline run log for ATSP");
    report->add_option("--method", method, "Method label for the table")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(problem_file, solve_out, eng, prov, lex, sbx);
        if (bench->parsed())
            return cmd_bench(dataset_file, bench_out, bench_format, bench_runlog, baseline_file, jobs,
                             k_arg, zero_shot, lenient, eng, prov, lex, sbx);
        if (report->parsed())
            return cmd_report(from_file, report_format, report_out, report_baseline, method);
    } catch (const std::exception& e) {
        std::cerr << "epic: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
