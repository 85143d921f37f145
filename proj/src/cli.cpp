#include "citecheck/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "citecheck/datastore.hpp"
#include "citecheck/http_backends.hpp"
#include "citecheck/metrics.hpp"
#include "citecheck/pipeline.hpp"
#include "citecheck/serialization.hpp"

namespace citecheck::cli {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "file not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

HttpTarget http_target(const json& j, HttpTarget target) {
  target.base_url = j.value("base_url", target.base_url);
  target.path = j.value("path", target.path);
  target.api_key_env = j.value("api_key_env", target.api_key_env);
  target.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long long>(target.timeout.count())));
  target.retry.max_attempts = j.value("max_attempts", target.retry.max_attempts);
  target.retry.base_delay =
      std::chrono::milliseconds(j.value("backoff_ms", static_cast<long long>(target.retry.base_delay.count())));
  if (j.contains("api_key")) {
    throw Error(ErrorCode::InvalidConfig, "put credentials in an environment variable and name it in 'api_key_env'");
  }
  return target;
}

VerifierOptions verifier_options(const json& j) {
  VerifierOptions options;
  options.threshold = j.value("threshold", options.threshold);
  options.char_budget = j.value("char_budget", options.char_budget);
  return options;
}

std::string answer_text(const std::vector<Statement>& statements) {
  std::string text;
  for (const auto& s : statements) {
    if (!text.empty()) text += ' ';
    text += s.text;
  }
  return text;
}

const std::vector<Statement>& scored_statements(const RunRecord& record, const std::string& stage) {
  if (stage == "final") return record.final.statements;
  const StageKind kind = stage == "initial" ? StageKind::Initial : StageKind::Evidence;
  for (const auto& trace : record.traces) {
    if (trace.stage == kind) return trace.outputs;
  }
  throw Error(ErrorCode::MalformedRecord, record.query_id + ": no " + stage + " trace");
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::filesystem::path failed_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".failed");
}

}  // namespace

BackendSet load_backends(const std::filesystem::path& config_path, bool need_generator) {
  const json config = read_json_file(config_path);
  const auto base_dir = config_path.parent_path();
  BackendSet set;
  try {
    if (need_generator) {
      if (!config.contains("generator")) throw Error(ErrorCode::InvalidConfig, "backend config lacks 'generator'");
      const json& g = config.at("generator");
      const auto type = g.value("type", std::string("http"));
      if (type == "scripted") {
        set.generator = std::move(load_script(base_dir / g.at("script").get<std::string>()).generator);
      } else if (type == "http") {
        ChatCompletionConfig chat;
        chat.target = http_target(g, chat.target);
        chat.model = g.value("model", std::string{});
        set.generator = std::make_unique<HttpChatGenerator>(chat);
      } else {
        throw Error(ErrorCode::InvalidConfig, "unknown generator type: " + type);
      }
    }

    if (!config.contains("verifier")) throw Error(ErrorCode::InvalidConfig, "backend config lacks 'verifier'");
    const json& v = config.at("verifier");
    const auto type = v.value("type", std::string("http"));
    if (type == "scripted") {
      set.verifier =
          std::move(load_script(base_dir / v.at("script").get<std::string>(), verifier_options(v)).verifier);
    } else if (type == "http") {
      EntailmentServiceConfig entail;
      entail.target = http_target(v, entail.target);
      entail.options = verifier_options(v);
      set.verifier = std::make_unique<HttpEntailmentVerifier>(entail);
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown verifier type: " + type);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, config_path.string() + ": " + e.what());
  }
  return set;
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  PipelineConfig config;
  DatasetLoad dataset;
  BackendSet backends;
  std::set<std::string> done;
  try {
    config.k = options.k;
    config.few_shot_count = options.shots;
    config.parallelism = options.parallel;
    config.reverify_after_refine = options.reverify;
    if (options.shots > 0) {
      config.few_shot_pool =
          load_few_shots(options.fewshot_file.empty() ? default_few_shot_path() : options.fewshot_file);
    }
    backends = load_backends(options.backend_config);
    config.entailment_threshold = backends.verifier->options().threshold;
    config.validate();
    dataset = load_dataset(options.dataset, options.k);

    if (std::filesystem::exists(options.out) && std::filesystem::file_size(options.out) > 0) {
      if (!options.resume) {
        err << "error: " << options.out.string() << " already has records; pass --resume to continue it\n";
        return kExitUsage;
      }
      const RunLoad previous = load_runs(options.out);
      for (const auto& r : previous.records) done.insert(r.query_id);
      if (!previous.corrupt.empty()) {
        err << "warning: " << previous.corrupt.size() << " unreadable line(s) in " << options.out.string() << "\n";
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  for (const auto& e : dataset.errors) {
    err << "warning: " << options.dataset.string() << ":" << e.line_no << ": " << e.reason << "\n";
  }

  std::size_t processed = 0;
  std::size_t skipped = 0;
  std::size_t abstentions = 0;
  std::size_t failures = 0;
  const std::size_t total = dataset.examples.size();
  for (std::size_t i = 0; i < total; ++i) {
    const auto& example = dataset.examples[i];
    if (done.contains(example.query.id)) {
      ++skipped;
      continue;
    }
    std::string status;
    try {
      const RunRecord record =
          run(example.query, example.passages, Backends{*backends.generator, *backends.verifier}, config);
      append_run(options.out, record);
      ++processed;
      if (record.final.abstained) ++abstentions;
      status = record.final.abstained ? "abstained" : "ok";
    } catch (const PipelineError& e) {
      ++failures;
      status = std::string("failed: ") + e.what();
      try {
        append_run(failed_path(options.out), e.partial());
      } catch (const Error& io) {
        err << "warning: " << io.what() << "\n";
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) {
        err << "error: " << e.what() << "\n";
        return kExitPartial;
      }
      ++failures;
      status = std::string("failed: ") + e.what();
    }
    err << "[" << (i + 1) << "/" << total << "] " << example.query.id << " " << status << "\n";
  }

  out << "examples: " << total << "\n"
      << "processed: " << processed << "\n"
      << "skipped (resume): " << skipped << "\n"
      << "abstentions: " << abstentions << "\n"
      << "backend errors: " << failures << "\n";
  if (dataset.truncated > 0) out << "passage lists truncated to k=" << options.k << ": " << dataset.truncated << "\n";

  const std::size_t attempted = processed + failures;
  if (attempted > 0 && 100.0 * static_cast<double>(failures) / static_cast<double>(attempted) > options.max_failure_pct) {
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  RunLoad runs;
  DatasetLoad dataset;
  BackendSet backends;
  const std::set<std::string> selected(options.metrics.begin(), options.metrics.end());
  const bool want_em = selected.contains("em");
  const bool want_claim = selected.contains("claim");
  const bool want_citation = selected.contains("citation");
  try {
    for (const auto& m : selected) {
      if (m != "em" && m != "claim" && m != "citation") throw Error(ErrorCode::InvalidConfig, "unknown metric: " + m);
    }
    if (options.stage != "final" && options.stage != "initial" && options.stage != "evidence") {
      throw Error(ErrorCode::InvalidConfig, "unknown stage: " + options.stage);
    }
    runs = load_runs(options.runs);
    dataset = load_dataset(options.dataset, std::numeric_limits<int>::max());
    if (want_claim || want_citation) {
      if (options.backend_config.empty()) {
        throw Error(ErrorCode::InvalidConfig, "claim and citation metrics need --backend-config with a verifier");
      }
      backends = load_backends(options.backend_config, false);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& c : runs.corrupt) {
    err << "warning: " << options.runs.string() << ":" << c.line_no << ": unreadable record\n";
  }

  std::map<std::string, const DatasetExample*> by_id;
  for (const auto& e : dataset.examples) by_id.emplace(e.query.id, &e);

  struct Sum {
    double total = 0;
    std::size_t count = 0;
    void add(const std::optional<double>& v) {
      if (v) {
        total += *v;
        ++count;
      }
    }
    std::optional<double> mean() const {
      if (count == 0) return std::nullopt;
      return total / static_cast<double>(count);
    }
  };
  Sum em, claim, recall, precision, f1;
  json per_example = json::array();
  std::set<std::string> seen;
  std::size_t join_failures = 0;
  std::size_t joined = 0;

  for (const auto& record : runs.records) {
    if (!seen.insert(record.query_id).second) continue;
    const auto it = by_id.find(record.query_id);
    if (it == by_id.end()) {
      ++join_failures;
      err << "warning: run id " << record.query_id << " not in dataset\n";
      continue;
    }
    const DatasetExample& example = *it->second;
    ++joined;

    std::optional<double> em_v, claim_v, recall_v, precision_v;
    try {
      const auto& statements = scored_statements(record, options.stage);
      const std::string text = answer_text(statements);
      if (const auto* gold = std::get_if<ShortAnswerGold>(&example.gold); gold && want_em) {
        em_v = metrics::em_recall(text, gold->alias_sets);
      }
      if (const auto* gold = std::get_if<ClaimGold>(&example.gold); gold && want_claim) {
        claim_v = metrics::claim_recall(text, gold->claims, *backends.verifier);
      }
      if (want_citation) {
        if (statements.empty()) {
          recall_v = 0.0;
        } else {
          const PassageSet passages = example.passages.truncated(record.config.k);
          const auto scores = metrics::citation_scores(statements, passages, *backends.verifier);
          recall_v = scores.recall;
          precision_v = scores.precision;
        }
      }
    } catch (const Error& e) {
      err << "error: " << record.query_id << ": " << e.what() << "\n";
      return kExitPartial;
    }
    const auto report = metrics::make_report(em_v, claim_v, recall_v, precision_v);
    em.add(report.em_recall);
    claim.add(report.claim_recall);
    recall.add(report.citation_recall);
    precision.add(report.citation_precision);
    f1.add(report.citation_f1);
    json row = report;
    row["id"] = record.query_id;
    per_example.push_back(row);
  }

  const metrics::MetricReport means{em.mean(), claim.mean(), recall.mean(), precision.mean(), f1.mean()};
  json summary = {{"examples", joined}, {"join_failures", join_failures}, {"stage", options.stage}, {"metrics", means},
                  {"per_example", per_example}};
  if (means.citation_recall && means.citation_precision) {
    summary["citation_f1_of_means"] = metrics::f1(*means.citation_recall, *means.citation_precision);
  }
  const auto summary_path =
      options.summary.empty() ? std::filesystem::path(options.runs.string() + ".summary.json") : options.summary;
  {
    std::ofstream file(summary_path);
    if (!file) {
      err << "error: cannot write " << summary_path.string() << "\n";
      return kExitPartial;
    }
    file << summary.dump(2) << "\n";
  }

  out << std::left << std::setw(22) << "metric" << "value\n";
  auto row = [&](const char* name, const std::optional<double>& v) {
    if (v) out << std::left << std::setw(22) << name << fixed2(*v) << "\n";
  };
  row("em_recall", means.em_recall);
  row("claim_recall", means.claim_recall);
  row("citation_recall", means.citation_recall);
  row("citation_precision", means.citation_precision);
  row("citation_f1", means.citation_f1);
  out << "examples: " << joined << "  join failures: " << join_failures << "\n";

  const std::size_t total = joined + join_failures;
  if (total > 0 &&
      100.0 * static_cast<double>(join_failures) / static_cast<double>(total) > options.max_join_failure_pct) {
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_trace(const TraceOptions& options, std::ostream& out, std::ostream& err) {
  RunLoad runs;
  try {
    runs = load_runs(options.runs);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const RunRecord* record = nullptr;
  for (const auto& r : runs.records) {
    if (r.query_id == options.id) record = &r;
  }
  if (record == nullptr) {
    err << "error: " << to_string(ErrorCode::UnknownId) << ": no run with id '" << options.id << "' in "
        << options.runs.string() << "\n";
    return kExitUsage;
  }

  out << "query " << record->query_id << ": " << record->question << "\n";
  for (const auto& trace : record->traces) {
    out << "\n== stage: " << to_string(trace.stage) << "\n";
    for (std::size_t i = 0; i < trace.prompts.size(); ++i) {
      if (options.show_prompts) out << "-- prompt " << (i + 1) << " --\n" << trace.prompts[i] << "\n";
      if (i < trace.raw_outputs.size()) out << "-- output " << (i + 1) << " --\n" << trace.raw_outputs[i] << "\n";
    }
    if (!trace.verdicts.empty()) out << "verdicts:\n";
    for (const auto& v : trace.verdicts) {
      if (const auto* e = std::get_if<EntailmentVerdict>(&v.verdict)) {
        out << "  " << (e->supported ? "[supported]   " : "[unsupported] ") << v.subject << "  (premise "
            << e->premise_digest << ")\n";
      } else {
        const auto& u = std::get<UtilityVerdict>(v.verdict);
        out << "  " << (u.relevant ? "[relevant]    " : "[irrelevant]  ") << "passage " << u.passage_index << " "
            << v.subject << "\n";
      }
    }
    if (!trace.discarded.empty()) out << "discarded:\n";
    for (const auto& d : trace.discarded) out << "  " << d.text << "  (" << d.reason << ")\n";
    if (!trace.dropped_citations.empty()) out << "dropped citations:\n";
    for (const auto& d : trace.dropped_citations) {
      out << "  [" << d.index << "] on " << d.statement_text << "  (" << d.reason << ")\n";
    }
  }
  out << "\n== final answer" << (record->final.abstained ? " (abstained)" : "") << "\n"
      << record->final.rendered << "\n";
  return kExitOk;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Verified-citation answer generation and evaluation"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Answer every dataset question and append run records");
  run_cmd->add_option("--dataset", run_opts.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_opts.out, "Run records JSONL (append-only)")->required();
  run_cmd->add_option("--backend-config", run_opts.backend_config, "Backend JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--fewshot-file", run_opts.fewshot_file, "Few-shot demonstrations JSON");
  run_cmd->add_option("--k", run_opts.k, "Passages per question")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--shots", run_opts.shots, "Few-shot demonstrations")->capture_default_str()->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--parallel", run_opts.parallel, "Concurrent backend calls")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_flag("--resume", run_opts.resume, "Skip ids already present in --out");
  run_cmd->add_flag("--reverify", run_opts.reverify, "Re-verify refined statements");
  run_cmd->add_option("--max-failure-pct", run_opts.max_failure_pct, "Exit 2 above this backend failure rate")
      ->capture_default_str();

  EvalOptions eval_opts;
  std::string metric_list = "em,claim,citation";
  auto* eval_cmd = app.add_subcommand("eval", "Score run records against gold labels");
  eval_cmd->add_option("--runs", eval_opts.runs, "Run records JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--dataset", eval_opts.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--backend-config", eval_opts.backend_config, "Backend JSON (verifier)");
  eval_cmd->add_option("--summary", eval_opts.summary, "Summary JSON path");
  eval_cmd->add_option("--metrics", metric_list, "Comma-separated: em,claim,citation")->capture_default_str();
  eval_cmd->add_option("--stage", eval_opts.stage, "Statements to score")
      ->check(CLI::IsMember({"final", "initial", "evidence"}))
      ->capture_default_str();
  eval_cmd->add_option("--max-join-failure-pct", eval_opts.max_join_failure_pct, "Exit 2 above this unmatched-id rate")
      ->capture_default_str();

  TraceOptions trace_opts;
  bool brief = false;
  auto* trace_cmd = app.add_subcommand("trace", "Print the stage traces of one run");
  trace_cmd->add_option("--runs", trace_opts.runs, "Run records JSONL")->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("--id", trace_opts.id, "Query id")->required();
  trace_cmd->add_flag("--brief", brief, "Omit prompts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run_cmd) return cmd_run(run_opts, std::cout, std::cerr);
  if (*eval_cmd) {
    eval_opts.metrics.clear();
    std::stringstream ss(metric_list);
    for (std::string m; std::getline(ss, m, ',');) {
      if (!m.empty()) eval_opts.metrics.push_back(m);
    }
    return cmd_eval(eval_opts, std::cout, std::cerr);
  }
  trace_opts.show_prompts = !brief;
  return cmd_trace(trace_opts, std::cout, std::cerr);
}

}  // namespace citecheck::cli
