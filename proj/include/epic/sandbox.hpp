#pragma once

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "epic/core.hpp"
#include "epic/errors.hpp"
#include "epic/gateway.hpp"
#include "epic/strings.hpp"

extern char** environ;

namespace epic {

struct SandboxConfig {
    std::string interpreter = "python3";
    std::vector<std::string> interpreter_args;  // e.g. {"-S"} to skip site init
    double test_timeout_secs = 10.0;
    unsigned max_exec_workers = 0;  // 0: hardware concurrency
};

enum class TestOutcome { pass, fail, error, timeout };

inline std::string to_string(TestOutcome o) {
    switch (o) {
        case TestOutcome::pass: return "pass";
        case TestOutcome::fail: return "fail";
        case TestOutcome::error: return "error";
        case TestOutcome::timeout: return "timeout";
    }
    return "error";
}

namespace detail {

struct RunResult {
    int exit_code = -1;
    bool timed_out = false;
};

// Spawns argv in its own process group, waits up to `timeout`, and kills
// the whole group on expiry. Stdout/stderr go to /dev/null unless a
// capture path is given.
inline RunResult run_subprocess(const std::vector<std::string>& argv, const std::string& cwd,
                                double timeout_secs, const std::string& stdout_path = {}) {
    static std::once_flag sigpipe_once;
    std::call_once(sigpipe_once, [] { ::signal(SIGPIPE, SIG_IGN); });

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
    if (stdout_path.empty()) {
        posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
    } else {
        posix_spawn_file_actions_addopen(&actions, 1, stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC,
                                         0644);
    }
    posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);
    if (!cwd.empty()) posix_spawn_file_actions_addchdir_np(&actions, cwd.c_str());

    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    pid_t pid = -1;
    int rc = posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0)
        throw SandboxError("cannot launch interpreter '" + argv[0] + "': " + std::strerror(rc));

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_secs);
    RunResult result;
    int status = 0;
    while (true) {
        pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) break;
        if (done < 0) throw SandboxError("waitpid failed");
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!result.timed_out && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

// Scratch directory under the system temp dir, removed on destruction.
class TempWorkspace {
public:
    TempWorkspace() {
        static std::atomic<unsigned> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path_ = base / ("epic-sbx-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempWorkspace() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempWorkspace(const TempWorkspace&) = delete;
    TempWorkspace& operator=(const TempWorkspace&) = delete;

    const std::filesystem::path& path() const { return path_; }

    void write_file(const std::string& name, const std::string& content) const {
        std::ofstream out(path_ / name, std::ios::binary);
        if (!out) throw SandboxError("cannot write workspace file: " + name);
        out << content;
    }

private:
    std::filesystem::path path_;
};

// Prelude prepended to every driver: disables sockets and denies writes
// outside the workspace, so a misbehaving candidate fails instead of
// touching the host.
inline const char* kGuardPrelude = R"(import builtins, io, os, socket, sys
_SBX = os.path.realpath(os.getcwd())
def _no_net(*a, **k):
    raise OSError("epic-sbx: network disabled")
socket.socket = _no_net
socket.create_connection = _no_net
socket.socketpair = _no_net
_real_open = builtins.open
def _guarded_open(file, mode="r", *args, **kwargs):
    if isinstance(file, (str, bytes, os.PathLike)) and any(c in str(mode) for c in "wax+"):
        p = os.path.realpath(os.fspath(file))
        if not (p == _SBX or p.startswith(_SBX + os.sep)):
            raise PermissionError("epic-sbx: write outside workspace denied")
    return _real_open(file, mode, *args, **kwargs)
builtins.open = _guarded_open
io.open = _guarded_open
)";

// Verdict script: reads a JSON array of statements, prints 1/0 per entry
// for "parses as exactly one assert statement".
inline const char* kAssertCheckScript = R"(import ast, json, sys
with open(sys.argv[1]) as fh:
    sources = json.load(fh)
for src in sources:
    ok = False
    try:
        tree = ast.parse(src)
        ok = len(tree.body) == 1 and isinstance(tree.body[0], ast.Assert)
    except (SyntaxError, ValueError):
        ok = False
    print(1 if ok else 0)
)";

inline std::string indent_lines(const std::string& text, const std::string& pad) {
    std::string out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        out += pad;
        out.append(text, start, end - start);
        out += '\n';
        if (end == text.size()) break;
        start = end + 1;
    }
    return out;
}

}  // namespace detail

// Pulls the first fenced code block out of a completion; without a fence
// the whole text is taken as code.
inline std::string extract_code_block(const std::string& response) {
    size_t open = response.find("```");
    if (open == std::string::npos) return response;
    size_t body = response.find('\n', open);
    if (body == std::string::npos) return response;
    size_t close = response.find("```", body);
    if (close == std::string::npos) return response;
    auto block = std::string_view{response}.substr(body + 1, close - body - 1);
    return std::string(strings::trim(block)) + "\n";
}

struct Evaluation {
    std::string code;
    FitnessScore fitness;
};

// Validates generated tests and executes candidate code against them in
// isolated interpreter subprocesses, one process per test, each with a hard
// wall-clock timeout.
class Sandbox {
public:
    explicit Sandbox(SandboxConfig cfg = {}) : cfg_(std::move(cfg)) {
        if (cfg_.test_timeout_secs <= 0) throw ConfigError("test timeout must be > 0");
        if (cfg_.max_exec_workers == 0) {
            unsigned hw = std::thread::hardware_concurrency();
            cfg_.max_exec_workers = hw == 0 ? 4 : hw;
        }
    }

    const SandboxConfig& config() const { return cfg_; }

    // Extracts the region between the first pair of $$$$ tags and
    // syntax-checks each line through the interpreter's parser. Invalid
    // lines are kept with valid=false; they never count toward fitness.
    std::vector<TestCase> parse_tests(const std::string& raw) const {
        size_t open = raw.find("$$$$");
        if (open == std::string::npos) throw TestExtractionError("response has no $$$$ test region");
        size_t close = raw.find("$$$$", open + 4);
        if (close == std::string::npos)
            throw TestExtractionError("response has an unterminated $$$$ test region");
        std::string region = raw.substr(open + 4, close - open - 4);

        std::vector<TestCase> tests;
        for (const auto& line : strings::split(region, '\n')) {
            auto t = strings::trim(line);
            if (!t.empty()) tests.push_back({std::string(t), false});
        }
        if (tests.empty()) return tests;

        json sources = json::array();
        for (const auto& t : tests) sources.push_back(t.source);

        detail::TempWorkspace ws;
        ws.write_file("_check.py", detail::kAssertCheckScript);
        ws.write_file("_sources.json", sources.dump());
        auto verdict_path = (ws.path() / "_verdicts.txt").string();
        auto res = detail::run_subprocess(interpreter_argv({"_check.py", "_sources.json"}),
                                          ws.path().string(), cfg_.test_timeout_secs, verdict_path);
        if (res.timed_out || res.exit_code != 0)
            throw SandboxError("test syntax check failed (interpreter exit " +
                               std::to_string(res.exit_code) + ")");
        std::ifstream in(verdict_path);
        std::string verdict;
        for (auto& t : tests) {
            if (!std::getline(in, verdict)) throw SandboxError("syntax checker returned short output");
            t.valid = strings::trim(verdict) == "1";
        }
        return tests;
    }

    // Runs each (valid) test in its own interpreter process against the
    // candidate code. Outcomes are indexed like `tests` regardless of
    // completion order; a timeout counts as a failure for fitness.
    std::vector<TestOutcome> run_suite(const std::string& code, const std::vector<TestCase>& tests) const {
        detail::TempWorkspace ws;
        ws.write_file("solution.py", code.empty() ? std::string("\n") : code);
        std::vector<TestOutcome> outcomes(tests.size(), TestOutcome::error);
        std::vector<std::string> drivers(tests.size());
        for (size_t i = 0; i < tests.size(); ++i) {
            std::string driver;
            driver += detail::kGuardPrelude;
            driver += "try:\n    from solution import *\nexcept BaseException:\n    sys.exit(2)\n";
            driver += "try:\n";
            driver += detail::indent_lines(tests[i].source, "    ");
            driver += "except AssertionError:\n    sys.exit(1)\nexcept BaseException:\n    sys.exit(2)\n";
            driver += "sys.exit(0)\n";
            drivers[i] = "test_" + std::to_string(i) + ".py";
            ws.write_file(drivers[i], driver);
        }

        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= tests.size()) return;
                try {
                    auto res = detail::run_subprocess(interpreter_argv({drivers[i]}), ws.path().string(),
                                                      cfg_.test_timeout_secs);
                    if (res.timed_out)
                        outcomes[i] = TestOutcome::timeout;
                    else if (res.exit_code == 0)
                        outcomes[i] = TestOutcome::pass;
                    else if (res.exit_code == 1)
                        outcomes[i] = TestOutcome::fail;
                    else
                        outcomes[i] = TestOutcome::error;
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        size_t n_workers = std::min<size_t>(cfg_.max_exec_workers, tests.size());
        if (n_workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        if (first_error) std::rethrow_exception(first_error);
        return outcomes;
    }

    // evaluatePrompt: generate code for the prompt, judge it against the
    // fixed suite, and return the exact pass rate.
    Evaluation evaluate_prompt(const std::string& prompt, const std::vector<TestCase>& tests,
                               Gateway& gateway, const PromptTemplates& templates,
                               const std::string& tag) const {
        if (tests.empty()) throw Error("evaluate_prompt: test suite must be nonempty");
        CompletionRequest req;
        req.system_text = templates.code_generation;
        req.user_text = prompt;
        req.temperature = kTemperatureCodeGeneration;
        req.tag = tag;
        auto resp = gateway.complete(req);
        std::string code = extract_code_block(resp.text);
        auto outcomes = run_suite(code, tests);
        std::vector<bool> passed;
        passed.reserve(outcomes.size());
        for (auto o : outcomes) passed.push_back(o == TestOutcome::pass);
        return {code, pass_rate(passed)};
    }

private:
    std::vector<std::string> interpreter_argv(std::vector<std::string> tail) const {
        std::vector<std::string> argv{cfg_.interpreter};
        argv.insert(argv.end(), cfg_.interpreter_args.begin(), cfg_.interpreter_args.end());
        argv.insert(argv.end(), std::make_move_iterator(tail.begin()), std::make_move_iterator(tail.end()));
        return argv;
    }

    SandboxConfig cfg_;
};

}  // namespace epic
