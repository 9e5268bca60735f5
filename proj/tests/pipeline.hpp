#pragma once

// End-to-end run over the bundled fixture, shared by the CLI tests and the
// acceptance binary.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace judge::testing {

namespace fs = std::filesystem;

inline fs::path fixture_dir() { return fs::path(JUDGE_TEST_DATA) / "fixture"; }

struct PipelineRun {
    int failed_rc = 0;
    std::string failed_step;
    bool ok() const { return failed_step.empty(); }
};

// Every stage writes into `out`; later stages read what earlier ones wrote.
inline PipelineRun run_pipeline(const fs::path& out) {
    const auto fx = fixture_dir();
    const std::string o = out.string();
    const std::string model = (out / "model.json").string();
    const std::string labeled = (out / "labeled.ndjson").string();
    const std::vector<std::vector<std::string>> steps{
        {"ingest", "--posts", (fx / "posts.ndjson").string(), "--comments", (fx / "comments.ndjson").string(), "--out", o},
        {"label", "--corpus", o, "--out", o},
        {"train", "--labeled", labeled, "--out", o},
        {"eval", "--labeled", labeled, "--model", "nb", "--out", o},
        {"classify", "--corpus", o, "--model", model, "--out", o},
        {"allotax", "--labeled", labeled, "--out", o},
        {"analyze", "popularity", "--corpus", o, "--model", model, "--out", o},
        {"analyze", "users", "--corpus", o, "--model", model, "--min-judged", "5", "--out", o},
        {"analyze", "demographics", "--corpus", o, "--model", model, "--out", o},
        {"awry", "--conversations", (fx / "conversations.ndjson").string(), "--model", model, "--mode", "offline",
         "--out", (out / "awry_offline").string()},
        {"awry", "--conversations", (fx / "conversations.ndjson").string(), "--model", model, "--mode", "online",
         "--out", (out / "awry_online").string()},
    };
    PipelineRun run;
    for (const auto& s : steps) {
        const int rc = cli::dispatch(s);
        if (rc != cli::kExitOk) {
            run.failed_rc = rc;
            run.failed_step = s[0] + (s[0] == "analyze" ? " " + s[1] : "");
            return run;
        }
    }
    return run;
}

inline std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

inline fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("judge_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace judge::testing
