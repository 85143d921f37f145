#include "citecheck/serialization.hpp"

#include <fstream>

namespace citecheck {

using nlohmann::json;

void to_json(json& j, const Query& v) { j = {{"id", v.id}, {"text", v.text}}; }
void from_json(const json& j, Query& v) {
  v = make_query(j.at("id").get<std::string>(), j.at("text").get<std::string>());
}

void to_json(json& j, const Passage& v) { j = {{"index", v.index}, {"title", v.title}, {"text", v.text}}; }
void from_json(const json& j, Passage& v) {
  v.index = j.at("index").get<int>();
  v.title = j.value("title", std::string{});
  v.text = j.at("text").get<std::string>();
}

void to_json(json& j, const PassageSet& v) { j = v.passages(); }
void from_json(const json& j, PassageSet& v) { v = PassageSet(j.get<std::vector<Passage>>()); }

void to_json(json& j, const CitationSet& v) { j = v.indices(); }
void from_json(const json& j, CitationSet& v) { v = CitationSet(j.get<std::vector<int>>()); }

void to_json(json& j, const EntailmentVerdict& v) {
  j = {{"supported", v.supported}, {"premise_digest", v.premise_digest}};
}
void from_json(const json& j, EntailmentVerdict& v) {
  v.supported = j.at("supported").get<bool>();
  v.premise_digest = j.at("premise_digest").get<std::string>();
}

void to_json(json& j, const UtilityVerdict& v) {
  j = {{"passage_index", v.passage_index}, {"relevant", v.relevant}};
}
void from_json(const json& j, UtilityVerdict& v) {
  v.passage_index = j.at("passage_index").get<int>();
  v.relevant = j.at("relevant").get<bool>();
}

void to_json(json& j, const Origin& v) {
  switch (v.kind) {
    case OriginKind::InitialAnswer: j = {{"kind", "initial_answer"}}; break;
    case OriginKind::Evidence: j = {{"kind", "evidence"}, {"passage_index", v.passage_index}}; break;
    case OriginKind::Refined: j = {{"kind", "refined"}}; break;
  }
}
void from_json(const json& j, Origin& v) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "initial_answer") {
    v = Origin::initial_answer();
  } else if (kind == "evidence") {
    v = Origin::evidence(j.at("passage_index").get<int>());
  } else if (kind == "refined") {
    v = Origin::refined();
  } else {
    throw Error(ErrorCode::MalformedRecord, "unknown statement origin: " + kind);
  }
}

void to_json(json& j, const Statement& v) {
  j = {{"text", v.text}, {"citations", v.citations}, {"origin", v.origin}};
  if (v.verdict) j["verdict"] = *v.verdict;
}
void from_json(const json& j, Statement& v) {
  std::optional<EntailmentVerdict> verdict;
  if (j.contains("verdict")) verdict = j.at("verdict").get<EntailmentVerdict>();
  v = make_statement(j.at("text").get<std::string>(), j.at("citations").get<CitationSet>(),
                     j.at("origin").get<Origin>(), std::move(verdict));
}

void to_json(json& j, const AttributedAnswer& v) {
  j = {{"statements", v.statements}, {"rendered", v.rendered}, {"abstained", v.abstained}};
}
void from_json(const json& j, AttributedAnswer& v) {
  v.statements = j.at("statements").get<std::vector<Statement>>();
  v.rendered = j.at("rendered").get<std::string>();
  v.abstained = j.value("abstained", false);
}

void to_json(json& j, const DecodingParams& v) {
  j = {{"temperature", v.temperature}, {"max_new_tokens", v.max_new_tokens}};
}
void from_json(const json& j, DecodingParams& v) {
  v.temperature = j.value("temperature", 0.0);
  v.max_new_tokens = j.value("max_new_tokens", DecodingParams{}.max_new_tokens);
}

void to_json(json& j, const VerdictRecord& v) {
  j = {{"subject", v.subject}};
  if (const auto* e = std::get_if<EntailmentVerdict>(&v.verdict)) {
    j["type"] = "entailment";
    j["entailment"] = *e;
  } else {
    j["type"] = "utility";
    j["utility"] = std::get<UtilityVerdict>(v.verdict);
  }
}
void from_json(const json& j, VerdictRecord& v) {
  v.subject = j.at("subject").get<std::string>();
  const auto type = j.at("type").get<std::string>();
  if (type == "entailment") {
    v.verdict = j.at("entailment").get<EntailmentVerdict>();
  } else if (type == "utility") {
    v.verdict = j.at("utility").get<UtilityVerdict>();
  } else {
    throw Error(ErrorCode::MalformedRecord, "unknown verdict type: " + type);
  }
}

void to_json(json& j, const Discard& v) { j = {{"text", v.text}, {"reason", v.reason}}; }
void from_json(const json& j, Discard& v) {
  v.text = j.at("text").get<std::string>();
  v.reason = j.at("reason").get<std::string>();
}

void to_json(json& j, const DroppedCitation& v) {
  j = {{"statement_text", v.statement_text}, {"index", v.index}, {"reason", v.reason}};
}
void from_json(const json& j, DroppedCitation& v) {
  v.statement_text = j.at("statement_text").get<std::string>();
  v.index = j.at("index").get<long long>();
  v.reason = j.at("reason").get<std::string>();
}

void to_json(json& j, const StageTrace& v) {
  j = {{"stage", to_string(v.stage)},        {"prompts", v.prompts},
       {"raw_outputs", v.raw_outputs},       {"verdicts", v.verdicts},
       {"discarded", v.discarded},           {"dropped_citations", v.dropped_citations}};
  if (!v.outputs.empty()) j["outputs"] = v.outputs;
}
void from_json(const json& j, StageTrace& v) {
  const auto stage = j.at("stage").get<std::string>();
  if (stage == "initial") {
    v.stage = StageKind::Initial;
  } else if (stage == "evidence") {
    v.stage = StageKind::Evidence;
  } else if (stage == "refine") {
    v.stage = StageKind::Refine;
  } else {
    throw Error(ErrorCode::MalformedRecord, "unknown stage: " + stage);
  }
  v.prompts = j.at("prompts").get<std::vector<std::string>>();
  v.raw_outputs = j.at("raw_outputs").get<std::vector<std::string>>();
  v.verdicts = j.at("verdicts").get<std::vector<VerdictRecord>>();
  v.discarded = j.at("discarded").get<std::vector<Discard>>();
  v.dropped_citations = j.value("dropped_citations", std::vector<DroppedCitation>{});
  v.outputs = j.value("outputs", std::vector<Statement>{});
}

void to_json(json& j, const StageTimings& v) {
  j = {{"initial_ms", v.initial_ms}, {"evidence_ms", v.evidence_ms}, {"refine_ms", v.refine_ms}};
}
void from_json(const json& j, StageTimings& v) {
  v.initial_ms = j.value("initial_ms", 0.0);
  v.evidence_ms = j.value("evidence_ms", 0.0);
  v.refine_ms = j.value("refine_ms", 0.0);
}

void to_json(json& j, const ConfigSnapshot& v) {
  j = {{"k", v.k},
       {"few_shot_count", v.few_shot_count},
       {"decoding", v.decoding},
       {"entailment_threshold", v.entailment_threshold},
       {"reverify_after_refine", v.reverify_after_refine}};
}
void from_json(const json& j, ConfigSnapshot& v) {
  v.k = j.at("k").get<int>();
  v.few_shot_count = j.at("few_shot_count").get<int>();
  v.decoding = j.at("decoding").get<DecodingParams>();
  v.entailment_threshold = j.at("entailment_threshold").get<double>();
  v.reverify_after_refine = j.at("reverify_after_refine").get<bool>();
}

void to_json(json& j, const RunRecord& v) {
  j = {{"query_id", v.query_id}, {"question", v.question}, {"final", v.final},
       {"traces", v.traces},     {"config", v.config},     {"timings", v.timings}};
  if (!v.error.empty()) j["error"] = v.error;
}
void from_json(const json& j, RunRecord& v) {
  v.query_id = j.at("query_id").get<std::string>();
  v.question = j.value("question", std::string{});
  v.final = j.at("final").get<AttributedAnswer>();
  v.traces = j.at("traces").get<std::vector<StageTrace>>();
  v.config = j.at("config").get<ConfigSnapshot>();
  v.timings = j.value("timings", StageTimings{});
  v.error = j.value("error", std::string{});
}

std::string serialize_run(const RunRecord& record, bool include_timings) {
  json j = record;
  if (!include_timings) j.erase("timings");
  return j.dump();
}

namespace metrics {

void to_json(json& j, const MetricReport& v) {
  j = json::object();
  if (v.em_recall) j["em_recall"] = *v.em_recall;
  if (v.claim_recall) j["claim_recall"] = *v.claim_recall;
  if (v.citation_recall) j["citation_recall"] = *v.citation_recall;
  if (v.citation_precision) j["citation_precision"] = *v.citation_precision;
  if (v.citation_f1) j["citation_f1"] = *v.citation_f1;
}

void from_json(const json& j, MetricReport& v) {
  auto field = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    return j.at(key).get<double>();
  };
  v.em_recall = field("em_recall");
  v.claim_recall = field("claim_recall");
  v.citation_recall = field("citation_recall");
  v.citation_precision = field("citation_precision");
  v.citation_f1 = field("citation_f1");
}

}  // namespace metrics

ScriptedBackendPair load_script(const std::filesystem::path& path, VerifierOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "script file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
  }

  ScriptedBackendPair pair{std::make_unique<ScriptedGenerator>(), std::make_unique<ScriptedVerifier>(options)};
  try {
    for (const auto& rule : doc.value("generator", json::array())) {
      const auto match = rule.value("match", std::string("exact"));
      if (match == "exact") {
        pair.generator->on_exact(rule.at("prompt").get<std::string>(), rule.at("response").get<std::string>());
      } else if (match == "prefix") {
        pair.generator->on_prefix(rule.at("prompt").get<std::string>(), rule.at("response").get<std::string>());
      } else {
        throw Error(ErrorCode::MalformedRecord, "unknown match kind '" + match + "' in " + path.string());
      }
    }
    for (const auto& rule : doc.value("verifier", json::array())) {
      auto premise = rule.at("premise").get<std::string>();
      auto hypothesis = rule.at("hypothesis").get<std::string>();
      if (rule.contains("entailed")) {
        pair.verifier->on(std::move(premise), std::move(hypothesis), rule.at("entailed").get<bool>());
      } else {
        pair.verifier->on_score(std::move(premise), std::move(hypothesis), rule.at("score").get<double>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, path.string() + ": " + e.what());
  }
  return pair;
}

}  // namespace citecheck
