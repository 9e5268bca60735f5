#include <gtest/gtest.h>

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "pipeline.hpp"

using namespace judge::testing;
using judge::cli::dispatch;

namespace {

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// One pipeline run shared by the tests below.
class CliPipeline : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = fresh_dir("cli_pipeline");
        std::ostringstream sink;
        auto* saved = std::cout.rdbuf(sink.rdbuf());
        run_ = run_pipeline(dir_);
        std::cout.rdbuf(saved);
    }
    static inline fs::path dir_;
    static inline PipelineRun run_;
};

} // namespace

TEST(CliExitCodes, UsageErrors) {
    EXPECT_EQ(dispatch({}), judge::cli::kExitUsage);
    EXPECT_EQ(dispatch({"frobnicate"}), judge::cli::kExitUsage);
    EXPECT_EQ(dispatch({"ingest", "--bogus"}), judge::cli::kExitUsage);
    EXPECT_EQ(dispatch({"label"}), judge::cli::kExitUsage);  // --corpus is required
    EXPECT_EQ(dispatch({"ingest", "--posts", "/nonexistent/p", "--comments", "/nonexistent/c"}), judge::cli::kExitUsage);
}

TEST(CliExitCodes, HelpIsSuccess) {
    std::ostringstream sink;
    auto* saved = std::cout.rdbuf(sink.rdbuf());
    const int rc = dispatch({"--help"});
    std::cout.rdbuf(saved);
    EXPECT_EQ(rc, judge::cli::kExitOk);
}

TEST(CliExitCodes, BadDataIsDataError) {
    const auto dir = fresh_dir("cli_bad");
    write(dir / "labeled.ndjson", R"({"post_id":"p1","comment_id":"c1","label":"YTA","valence":"positive","body":"x"})" "\n");
    EXPECT_EQ(dispatch({"train", "--labeled", (dir / "labeled.ndjson").string(), "--out", (dir / "o").string()}),
              judge::cli::kExitData);
    write(dir / "model.json", "{not json");
    write(dir / "threads.ndjson", "");
    EXPECT_EQ(dispatch({"classify", "--corpus", dir.string(), "--model", (dir / "model.json").string(), "--out",
                        (dir / "o").string()}),
              judge::cli::kExitData);
}

TEST(CliExitCodes, JudgeSourceIsExclusive) {
    const auto dir = fresh_dir("cli_judge");
    write(dir / "threads.ndjson", "");
    write(dir / "p.csv", "comment_id,valence,score\n");
    EXPECT_EQ(dispatch({"classify", "--corpus", dir.string(), "--out", dir.string()}), judge::cli::kExitUsage);
    EXPECT_EQ(dispatch({"classify", "--corpus", dir.string(), "--model", (dir / "p.csv").string(), "--predictions",
                        (dir / "p.csv").string(), "--out", dir.string()}),
              judge::cli::kExitUsage);
}

TEST_F(CliPipeline, EveryStageSucceeds) {
    EXPECT_TRUE(run_.ok()) << run_.failed_step << " exited " << run_.failed_rc;
}

TEST_F(CliPipeline, OutputsExist) {
    for (const char* f : {"threads.ndjson", "index.json", "labeled.ndjson", "label_histogram.csv", "model.json",
                          "cv_folds.csv", "eval_folds.csv", "predictions.csv", "allotax.csv", "post_judgements.csv",
                          "popularity_curve.csv", "popularity_tests.csv", "user_tallies.csv", "lorenz.csv",
                          "negativity_curve.csv", "demographics.csv", "demographics_tables.csv",
                          "demographics_regression.csv", "awry_offline/awry_metrics.csv",
                          "awry_online/awry_predictions.csv"}) {
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    }
}

TEST_F(CliPipeline, ReportsCarryProvenance) {
    std::size_t seen = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir_)) {
        if (!e.path().string().ends_with("_report.json")) continue;
        ++seen;
        std::ifstream in(e.path());
        const auto j = nlohmann::json::parse(in);
        for (const char* key : {"format_version", "tool", "command", "seed", "config", "results", "outputs"}) {
            EXPECT_TRUE(j.contains(key)) << e.path() << " lacks " << key;
        }
        EXPECT_EQ(j["format_version"], 1);
        for (const auto& name : j["outputs"]) EXPECT_TRUE(fs::exists(e.path().parent_path() / name.get<std::string>()));
    }
    EXPECT_EQ(seen, 11u);
}

TEST_F(CliPipeline, AllotaxTableShape) {
    std::ifstream in(dir_ / "allotax.csv");
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "term,rank_pos,rank_neg,contribution,side");
}
