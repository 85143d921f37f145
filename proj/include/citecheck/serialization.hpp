#pragma once

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "citecheck/core.hpp"
#include "citecheck/metrics.hpp"
#include "citecheck/pipeline.hpp"
#include "citecheck/scripted_backends.hpp"

// JSON mappings for the domain types. Field names are snake_case; optional
// fields are omitted when absent.
namespace citecheck {

void to_json(nlohmann::json& j, const Query& v);
void from_json(const nlohmann::json& j, Query& v);
void to_json(nlohmann::json& j, const Passage& v);
void from_json(const nlohmann::json& j, Passage& v);
void to_json(nlohmann::json& j, const PassageSet& v);
void from_json(const nlohmann::json& j, PassageSet& v);
void to_json(nlohmann::json& j, const CitationSet& v);
void from_json(const nlohmann::json& j, CitationSet& v);
void to_json(nlohmann::json& j, const EntailmentVerdict& v);
void from_json(const nlohmann::json& j, EntailmentVerdict& v);
void to_json(nlohmann::json& j, const UtilityVerdict& v);
void from_json(const nlohmann::json& j, UtilityVerdict& v);
void to_json(nlohmann::json& j, const Origin& v);
void from_json(const nlohmann::json& j, Origin& v);
void to_json(nlohmann::json& j, const Statement& v);
void from_json(const nlohmann::json& j, Statement& v);
void to_json(nlohmann::json& j, const AttributedAnswer& v);
void from_json(const nlohmann::json& j, AttributedAnswer& v);
void to_json(nlohmann::json& j, const DecodingParams& v);
void from_json(const nlohmann::json& j, DecodingParams& v);
void to_json(nlohmann::json& j, const VerdictRecord& v);
void from_json(const nlohmann::json& j, VerdictRecord& v);
void to_json(nlohmann::json& j, const Discard& v);
void from_json(const nlohmann::json& j, Discard& v);
void to_json(nlohmann::json& j, const DroppedCitation& v);
void from_json(const nlohmann::json& j, DroppedCitation& v);
void to_json(nlohmann::json& j, const StageTrace& v);
void from_json(const nlohmann::json& j, StageTrace& v);
void to_json(nlohmann::json& j, const StageTimings& v);
void from_json(const nlohmann::json& j, StageTimings& v);
void to_json(nlohmann::json& j, const ConfigSnapshot& v);
void from_json(const nlohmann::json& j, ConfigSnapshot& v);
void to_json(nlohmann::json& j, const RunRecord& v);
void from_json(const nlohmann::json& j, RunRecord& v);

/// One-line JSON. Without timings the output is byte-identical for
/// identical runs.
std::string serialize_run(const RunRecord& record, bool include_timings = true);

namespace metrics {
void to_json(nlohmann::json& j, const MetricReport& v);
void from_json(const nlohmann::json& j, MetricReport& v);
}  // namespace metrics

/// Script file for offline runs:
/// {"generator": [{"match": "exact"|"prefix", "prompt", "response"}],
///  "verifier":  [{"premise", "hypothesis", "entailed" | "score"}]}
struct ScriptedBackendPair {
  std::unique_ptr<ScriptedGenerator> generator;
  std::unique_ptr<ScriptedVerifier> verifier;
};

ScriptedBackendPair load_script(const std::filesystem::path& path, VerifierOptions options = {});

}  // namespace citecheck
