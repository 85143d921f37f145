#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "test_files.hpp"
#include "citecheck/cli.hpp"
#include "citecheck/datastore.hpp"
#include "citecheck/error.hpp"
#include "citecheck/serialization.hpp"

namespace citecheck {
namespace {

using nlohmann::json;

std::filesystem::path fixture(const std::string& name) { return testing::test_dir() / "fixtures" / "e2e" / name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::scratch_dir("cli"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  cli::RunOptions run_options() const {
    cli::RunOptions o;
    o.dataset = fixture("dataset.jsonl");
    o.backend_config = fixture("backends.json");
    o.out = dir_ / "runs.jsonl";
    o.parallel = 1;
    return o;
  }

  int run(const cli::RunOptions& o) {
    out_.str("");
    err_.str("");
    return cli::cmd_run(o, out_, err_);
  }

  std::filesystem::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, RunWritesOneRecordPerExample) {
  ASSERT_EQ(run(run_options()), cli::kExitOk) << err_.str();
  const auto load = load_runs(dir_ / "runs.jsonl");
  ASSERT_EQ(load.records.size(), 3u);
  EXPECT_EQ(load.records[0].query_id, "q1");
  EXPECT_EQ(load.records[0].final.rendered, "The capital of Australia is Canberra, which was founded in 1913.[1]");
  EXPECT_EQ(load.records[0].config.k, 5);
  EXPECT_EQ(load.records[1].final.rendered,
            "Cats purr by twitching their laryngeal muscles, and purring often signals contentment.[1] It can also "
            "help stressed cats soothe themselves.[1][2]");
  EXPECT_TRUE(load.records[2].final.abstained);
  EXPECT_EQ(load.records[2].final.rendered, "No verified evidence.");
  EXPECT_NE(out_.str().find("abstentions: 1"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "runs.jsonl.failed"));
}

TEST_F(CliTest, ResumeSkipsFinishedIds) {
  ASSERT_EQ(run(run_options()), cli::kExitOk);
  const auto full = load_runs(dir_ / "runs.jsonl").records;

  auto o = run_options();
  o.out = dir_ / "partial.jsonl";
  append_run(o.out, full[0]);
  append_run(o.out, full[1]);
  o.resume = true;
  ASSERT_EQ(run(o), cli::kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("processed: 1\n"), std::string::npos);
  EXPECT_NE(out_.str().find("skipped (resume): 2"), std::string::npos);
  const auto resumed = load_runs(o.out).records;
  ASSERT_EQ(resumed.size(), 3u);
  EXPECT_EQ(resumed[2].query_id, "q3");
  for (std::size_t i = 0; i < full.size(); ++i) EXPECT_EQ(serialize_run(resumed[i], false), serialize_run(full[i], false));
}

TEST_F(CliTest, NonEmptyOutputNeedsResume) {
  auto o = run_options();
  std::ofstream(o.out) << "{}\n";
  EXPECT_EQ(run(o), cli::kExitUsage);
  EXPECT_NE(err_.str().find("--resume"), std::string::npos);
}

TEST_F(CliTest, UnreachableBackendFailsWithPartialRecords) {
  auto o = run_options();
  o.backend_config = fixture("unreachable.json");
  EXPECT_EQ(run(o), cli::kExitPartial);
  EXPECT_NE(out_.str().find("backend errors: 3"), std::string::npos);
  const auto failed = load_runs(dir_ / "runs.jsonl.failed");
  ASSERT_EQ(failed.records.size(), 3u);
  for (const auto& r : failed.records) {
    EXPECT_FALSE(r.error.empty());
    ASSERT_FALSE(r.traces.empty());
    EXPECT_FALSE(r.traces[0].prompts.empty());
  }
}

TEST_F(CliTest, BadConfigurationIsAUsageError) {
  auto o = run_options();
  o.k = 0;
  EXPECT_EQ(run(o), cli::kExitUsage);
  o = run_options();
  o.dataset = dir_ / "missing.jsonl";
  EXPECT_EQ(run(o), cli::kExitUsage);
  o = run_options();
  o.shots = 5;
  EXPECT_EQ(run(o), cli::kExitUsage);
}

TEST_F(CliTest, EvalMatchesHandComputedMeans) {
  ASSERT_EQ(run(run_options()), cli::kExitOk);
  cli::EvalOptions e;
  e.runs = dir_ / "runs.jsonl";
  e.dataset = fixture("dataset.jsonl");
  e.backend_config = fixture("backends.json");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(e, out, err), cli::kExitOk) << err.str();

  const json summary = json::parse(testing::read_file(dir_ / "runs.jsonl.summary.json"));
  const json& m = summary.at("metrics");
  EXPECT_NEAR(m.at("em_recall").get<double>(), 50.0, 0.01);
  EXPECT_NEAR(m.at("claim_recall").get<double>(), 50.0, 0.01);
  EXPECT_NEAR(m.at("citation_recall").get<double>(), 66.67, 0.01);
  EXPECT_NEAR(m.at("citation_precision").get<double>(), 83.33, 0.01);
  EXPECT_NEAR(m.at("citation_f1").get<double>(), 90.0, 0.01);
  EXPECT_NEAR(summary.at("citation_f1_of_means").get<double>(), 74.07, 0.01);
  EXPECT_EQ(summary.at("examples"), 3);

  const json& rows = summary.at("per_example");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_FALSE(rows[2].contains("citation_precision"));
  EXPECT_EQ(rows[2].at("citation_recall"), 0.0);
  EXPECT_NEAR(rows[1].at("citation_precision").get<double>(), 66.67, 0.01);
  EXPECT_NE(out.str().find("citation_f1"), std::string::npos);
}

TEST_F(CliTest, EvalOmitsClaimRecallWithoutClaims) {
  ASSERT_EQ(run(run_options()), cli::kExitOk);
  // keep only the factoid records in the dataset
  std::ifstream in(fixture("dataset.jsonl"));
  std::ofstream factoid(dir_ / "factoid.jsonl");
  for (std::string line; std::getline(in, line);) {
    if (line.find("\"claims\"") == std::string::npos) factoid << line << "\n";
  }
  factoid.close();
  cli::EvalOptions e;
  e.runs = dir_ / "runs.jsonl";
  e.dataset = dir_ / "factoid.jsonl";
  e.backend_config = fixture("backends.json");
  e.summary = dir_ / "s.json";
  e.max_join_failure_pct = 50;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_eval(e, out, err), cli::kExitOk) << err.str();
  const json summary = json::parse(testing::read_file(dir_ / "s.json"));
  EXPECT_FALSE(summary.at("metrics").contains("claim_recall"));
  EXPECT_EQ(summary.at("join_failures"), 1);
  EXPECT_NEAR(summary.at("metrics").at("em_recall").get<double>(), 50.0, 0.01);

  e.max_join_failure_pct = 0;
  std::ostringstream out2, err2;
  EXPECT_EQ(cli::cmd_eval(e, out2, err2), cli::kExitPartial);
}

TEST_F(CliTest, EvalScoresIntermediateStages) {
  ASSERT_EQ(run(run_options()), cli::kExitOk);
  for (const std::string stage : {"initial", "evidence"}) {
    cli::EvalOptions e;
    e.runs = dir_ / "runs.jsonl";
    e.dataset = fixture("dataset.jsonl");
    e.backend_config = fixture("backends.json");
    e.summary = dir_ / (stage + ".json");
    e.metrics = {"em", "citation"};
    e.stage = stage;
    std::ostringstream out, err;
    ASSERT_EQ(cli::cmd_eval(e, out, err), cli::kExitOk) << stage << ": " << err.str();
    const json summary = json::parse(testing::read_file(e.summary));
    EXPECT_EQ(summary.at("stage"), stage);
    const json& m = summary.at("metrics");
    EXPECT_NEAR(m.at("em_recall").get<double>(), 50.0, 0.01) << stage;
    EXPECT_NEAR(m.at("citation_recall").get<double>(), 66.67, 0.01) << stage;
    EXPECT_NEAR(m.at("citation_precision").get<double>(), 100.0, 0.01) << stage;
  }
  cli::EvalOptions bad;
  bad.runs = dir_ / "runs.jsonl";
  bad.dataset = fixture("dataset.jsonl");
  bad.metrics = {"em"};
  bad.stage = "refine";
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_eval(bad, out, err), cli::kExitUsage);
}

TEST_F(CliTest, EvalRejectsUnknownMetric) {
  cli::EvalOptions e;
  e.runs = fixture("dataset.jsonl");
  e.dataset = fixture("dataset.jsonl");
  e.metrics = {"bleu"};
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_eval(e, out, err), cli::kExitUsage);
}

TEST_F(CliTest, TraceShowsDiscards) {
  ASSERT_EQ(run(run_options()), cli::kExitOk);
  cli::TraceOptions t;
  t.runs = dir_ / "runs.jsonl";
  t.id = "q1";
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_trace(t, out, err), cli::kExitOk);
  EXPECT_NE(out.str().find("Sydney is the capital of Australia.  (unsupported)"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("-- prompt 1 --"), std::string::npos);

  t.id = "q2";
  t.show_prompts = false;
  std::ostringstream out2;
  ASSERT_EQ(cli::cmd_trace(t, out2, err), cli::kExitOk);
  EXPECT_NE(out2.str().find("Cats purr to scare predators.  (uncited)"), std::string::npos) << out2.str();
  EXPECT_NE(out2.str().find("out_of_range"), std::string::npos);
  EXPECT_EQ(out2.str().find("-- prompt"), std::string::npos);

  t.id = "nope";
  std::ostringstream out3, err3;
  EXPECT_EQ(cli::cmd_trace(t, out3, err3), cli::kExitUsage);
}

TEST_F(CliTest, BackendConfigRefusesInlineKeys) {
  const auto path = dir_ / "backends.json";
  std::ofstream(path) << R"({"generator":{"type":"http","base_url":"http://x","model":"m","api_key":"sk-1"},
                             "verifier":{"type":"http","base_url":"http://x"}})";
  try {
    cli::load_backends(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
  }
  std::ofstream(path) << R"({"generator":{"type":"carrier-pigeon"},"verifier":{"type":"http"}})";
  EXPECT_THROW(cli::load_backends(path), Error);
}

TEST_F(CliTest, MainEntryParsesFlags) {
  const std::string dataset = fixture("dataset.jsonl").string();
  const std::string config = fixture("backends.json").string();
  const std::string out = (dir_ / "main.jsonl").string();
  std::vector<std::string> args{"citecheck", "run", "--dataset", dataset, "--out", out, "--backend-config", config,
                                "--parallel", "2"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  EXPECT_EQ(cli::main_entry(static_cast<int>(argv.size()), argv.data()), cli::kExitOk);
  EXPECT_EQ(load_runs(out).records.size(), 3u);

  std::vector<std::string> bad{"citecheck", "run", "--dataset", dataset};
  std::vector<char*> bad_argv;
  for (auto& a : bad) bad_argv.push_back(a.data());
  EXPECT_EQ(cli::main_entry(static_cast<int>(bad_argv.size()), bad_argv.data()), cli::kExitUsage);
}

}  // namespace
}  // namespace citecheck
