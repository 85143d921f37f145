#include "citecheck/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <future>
#include <iterator>
#include <limits>
#include <optional>
#include <thread>

#include "citecheck/textproc.hpp"

namespace citecheck {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs fn(0..n-1) on up to `workers` threads. Exceptions are kept per index
// and the lowest-index one is rethrown after every task has finished.
template <typename Fn>
void bounded_for_each(std::size_t n, int workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::optional<std::string> generate_or_refuse(GeneratorBackend& generator, const Prompt& prompt,
                                              const DecodingParams& params) {
  try {
    return generator.generate(prompt.text, params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BackendRefusal) return std::nullopt;
    throw;
  }
}

// Everything one passage contributes to the evidence stage.
struct PassageOutcome {
  std::vector<std::string> prompts;
  std::vector<std::string> raw_outputs;
  std::vector<VerdictRecord> verdicts;
  std::vector<Discard> discarded;
  std::vector<Statement> statements;
};

void evidence_for_passage(const Query& query, const Passage& passage, GeneratorBackend& generator,
                          VerifierBackend& verifier, const PipelineConfig& config, PassageOutcome& out) {
  const Prompt check = build_utility_prompt(query, passage);
  out.prompts.push_back(check.text);
  const auto check_reply = generate_or_refuse(generator, check, config.decoding);
  out.raw_outputs.push_back(check_reply.value_or(""));

  bool relevant = false;
  try {
    relevant = parse_yes_no(check_reply.value_or(""));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnparseableVerdict) throw;
    out.discarded.push_back({check_reply.value_or(""), std::string(discard_reason::kUnparseableVerdict)});
  }
  out.verdicts.push_back({passage.title, UtilityVerdict{passage.index, relevant}});
  if (!relevant) {
    return;
  }

  const Prompt answer = build_evidence_prompt(query, passage);
  out.prompts.push_back(answer.text);
  const auto evidence = generate_or_refuse(generator, answer, config.decoding);
  out.raw_outputs.push_back(evidence.value_or(""));
  if (!evidence) {
    out.discarded.push_back({"", std::string(discard_reason::kRefusal)});
    return;
  }

  const std::string premise = concat_premise({passage});
  for (const auto& raw : split_statements(*evidence)) {
    // Markers copied from the passage are meaningless here; the citation is {i}.
    std::string text = extract_citations(raw, std::numeric_limits<int>::max()).clean_text;
    if (text.empty()) {
      out.discarded.push_back({raw.text, std::string(discard_reason::kEmpty)});
      continue;
    }
    const EntailmentVerdict verdict = verifier.check_entailment(premise, text);
    out.verdicts.push_back({text, verdict});
    if (!verdict.supported) {
      out.discarded.push_back({text, std::string(discard_reason::kUnsupported)});
      continue;
    }
    out.statements.push_back(
        make_statement(std::move(text), CitationSet{passage.index}, Origin::evidence(passage.index), verdict));
  }
}

CitationSet citation_union(std::span<const Statement> statements) {
  CitationSet all;
  for (const auto& s : statements) {
    for (int index : s.citations) all.insert(index);
  }
  return all;
}

}  // namespace

void PipelineConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (few_shot_count < 0) throw Error(ErrorCode::InvalidConfig, "few-shot count must be >= 0");
  if (static_cast<std::size_t>(few_shot_count) > few_shot_pool.size()) {
    throw Error(ErrorCode::InvalidConfig, "requested " + std::to_string(few_shot_count) +
                                              " few-shot examples but only " +
                                              std::to_string(few_shot_pool.size()) + " are loaded");
  }
  if (parallelism < 1) throw Error(ErrorCode::InvalidConfig, "parallelism must be >= 1");
  if (decoding.temperature < 0) throw Error(ErrorCode::InvalidConfig, "temperature must be >= 0");
  if (decoding.max_new_tokens < 1) throw Error(ErrorCode::InvalidConfig, "max_new_tokens must be >= 1");
  if (entailment_threshold < 0 || entailment_threshold > 1) {
    throw Error(ErrorCode::InvalidConfig, "entailment threshold must lie in [0, 1]");
  }
}

std::span<const FewShotExample> PipelineConfig::shots() const {
  const auto count = std::min<std::size_t>(few_shot_pool.size(), static_cast<std::size_t>(std::max(few_shot_count, 0)));
  return std::span<const FewShotExample>(few_shot_pool).first(count);
}

ConfigSnapshot snapshot(const PipelineConfig& config) {
  return {config.k, config.few_shot_count, config.decoding, config.entailment_threshold,
          config.reverify_after_refine};
}

std::string_view to_string(StageKind stage) {
  switch (stage) {
    case StageKind::Initial: return "initial";
    case StageKind::Evidence: return "evidence";
    case StageKind::Refine: return "refine";
  }
  return "unknown";
}

StageResult stage_initial(const Query& query, const PassageSet& passages, GeneratorBackend& generator,
                          VerifierBackend& verifier, const PipelineConfig& config) {
  StageResult result;
  StageTrace& trace = result.trace;
  trace.stage = StageKind::Initial;
  try {
    const Prompt prompt = build_initial_prompt(query, passages, config.shots());
    trace.prompts.push_back(prompt.text);
    const auto answer = generate_or_refuse(generator, prompt, config.decoding);
    trace.raw_outputs.push_back(answer.value_or(""));
    if (!answer) return result;

    for (const auto& raw : split_statements(*answer)) {
      ExtractedCitations extracted = extract_citations(raw, passages.k());
      for (long long index : extracted.dropped) {
        trace.dropped_citations.push_back({extracted.clean_text, index, std::string(drop_reason::kOutOfRange)});
      }
      if (extracted.clean_text.empty()) {
        trace.discarded.push_back({raw.text, std::string(discard_reason::kEmpty)});
        continue;
      }
      if (extracted.citations.empty()) {
        trace.discarded.push_back({extracted.clean_text, std::string(discard_reason::kUncited)});
        continue;
      }
      const EntailmentVerdict verdict =
          verifier.check_entailment(concat_premise(passages, extracted.citations), extracted.clean_text);
      trace.verdicts.push_back({extracted.clean_text, verdict});
      if (!verdict.supported) {
        trace.discarded.push_back({extracted.clean_text, std::string(discard_reason::kUnsupported)});
        continue;
      }
      result.statements.push_back(make_statement(std::move(extracted.clean_text), std::move(extracted.citations),
                                                 Origin::initial_answer(), verdict));
    }
  } catch (const Error& e) {
    throw StageFailure(e, trace);
  }
  trace.outputs = result.statements;
  return result;
}

StageResult stage_evidence(const Query& query, const PassageSet& passages, GeneratorBackend& generator,
                           VerifierBackend& verifier, const PipelineConfig& config) {
  std::vector<PassageOutcome> outcomes(static_cast<std::size_t>(passages.k()));
  std::exception_ptr failure;
  try {
    bounded_for_each(outcomes.size(), config.parallelism, [&](std::size_t i) {
      evidence_for_passage(query, passages.passages()[i], generator, verifier, config, outcomes[i]);
    });
  } catch (...) {
    failure = std::current_exception();
  }

  StageResult result;
  StageTrace& trace = result.trace;
  trace.stage = StageKind::Evidence;
  for (auto& o : outcomes) {
    std::move(o.prompts.begin(), o.prompts.end(), std::back_inserter(trace.prompts));
    std::move(o.raw_outputs.begin(), o.raw_outputs.end(), std::back_inserter(trace.raw_outputs));
    std::move(o.verdicts.begin(), o.verdicts.end(), std::back_inserter(trace.verdicts));
    std::move(o.discarded.begin(), o.discarded.end(), std::back_inserter(trace.discarded));
    std::move(o.statements.begin(), o.statements.end(), std::back_inserter(result.statements));
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      throw StageFailure(e, trace);
    }
  }
  trace.outputs = result.statements;
  return result;
}

RefineResult stage_refine(const Query& query, const PassageSet& passages, std::span<const Statement> statements,
                          GeneratorBackend& generator, VerifierBackend* reverifier, const PipelineConfig& config) {
  RefineResult result;
  StageTrace& trace = result.trace;
  trace.stage = StageKind::Refine;
  if (statements.empty()) {
    result.answer.abstained = true;
    result.answer.rendered = std::string(kAbstentionText);
    return result;
  }

  try {
    const Prompt prompt = build_refine_prompt(query, passages, statements);
    trace.prompts.push_back(prompt.text);
    const auto refined = generate_or_refuse(generator, prompt, config.decoding);
    trace.raw_outputs.push_back(refined.value_or(""));
    if (!refined) {
      trace.discarded.push_back({"", std::string(discard_reason::kRefusal)});
      result.answer.abstained = true;
      result.answer.rendered = std::string(kAbstentionText);
      return result;
    }

    const CitationSet allowed = citation_union(statements);
    std::vector<Statement>& out = result.answer.statements;
    for (const auto& raw : split_statements(*refined)) {
      ExtractedCitations extracted = extract_citations(raw, passages.k());
      for (long long index : extracted.dropped) {
        trace.dropped_citations.push_back({extracted.clean_text, index, std::string(drop_reason::kOutOfRange)});
      }
      CitationSet kept;
      for (int index : extracted.citations) {
        if (allowed.contains(index)) {
          kept.insert(index);
        } else {
          trace.dropped_citations.push_back({extracted.clean_text, index, std::string(drop_reason::kNotInEvidence)});
        }
      }
      if (extracted.clean_text.empty()) {
        trace.discarded.push_back({raw.text, std::string(discard_reason::kEmpty)});
        continue;
      }

      std::optional<EntailmentVerdict> verdict;
      if (config.reverify_after_refine && reverifier != nullptr) {
        verdict = reverifier->check_entailment(concat_premise(passages, kept), extracted.clean_text);
        trace.verdicts.push_back({extracted.clean_text, *verdict});
        if (!verdict->supported) {
          trace.discarded.push_back({extracted.clean_text, std::string(discard_reason::kUnsupportedAfterRefine)});
          continue;
        }
      }
      out.push_back(make_statement(std::move(extracted.clean_text), std::move(kept), Origin::refined(), verdict));
    }
    if (out.empty()) {
      result.answer.abstained = true;
      result.answer.rendered = std::string(kAbstentionText);
    } else {
      result.answer.rendered = render_answer(out, passages.k());
    }
  } catch (const Error& e) {
    throw StageFailure(e, trace);
  }
  return result;
}

RunRecord run(const Query& query, const PassageSet& all_passages, Backends backends, const PipelineConfig& config) {
  config.validate();
  const PassageSet passages = all_passages.truncated(config.k);

  RunRecord record;
  record.query_id = query.id;
  record.question = query.text;
  record.config = snapshot(config);

  std::optional<StageResult> initial;
  std::optional<StageResult> evidence;
  std::optional<StageTrace> initial_partial;
  std::optional<StageTrace> evidence_partial;

  auto do_initial = [&] {
    const auto t0 = Clock::now();
    try {
      initial = stage_initial(query, passages, backends.generator, backends.verifier, config);
    } catch (const StageFailure& e) {
      initial_partial = e.partial();
      record.timings.initial_ms = elapsed_ms(t0);
      throw;
    }
    record.timings.initial_ms = elapsed_ms(t0);
  };
  auto do_evidence = [&] {
    const auto t0 = Clock::now();
    try {
      evidence = stage_evidence(query, passages, backends.generator, backends.verifier, config);
    } catch (const StageFailure& e) {
      evidence_partial = e.partial();
      record.timings.evidence_ms = elapsed_ms(t0);
      throw;
    }
    record.timings.evidence_ms = elapsed_ms(t0);
  };

  std::exception_ptr initial_error;
  std::exception_ptr evidence_error;
  if (config.parallelism > 1) {
    auto pending = std::async(std::launch::async, do_initial);
    try {
      do_evidence();
    } catch (...) {
      evidence_error = std::current_exception();
    }
    try {
      pending.get();
    } catch (...) {
      initial_error = std::current_exception();
    }
  } else {
    try {
      do_initial();
    } catch (...) {
      initial_error = std::current_exception();
    }
    if (!initial_error) {
      try {
        do_evidence();
      } catch (...) {
        evidence_error = std::current_exception();
      }
    }
  }

  auto fail = [&](std::exception_ptr error) {
    if (initial) record.traces.push_back(initial->trace);
    else if (initial_partial) record.traces.push_back(*initial_partial);
    if (evidence) record.traces.push_back(evidence->trace);
    else if (evidence_partial) record.traces.push_back(*evidence_partial);
    try {
      std::rethrow_exception(error);
    } catch (const Error& e) {
      record.error = e.what();
      throw PipelineError(e, record);
    }
  };
  if (initial_error) fail(initial_error);
  if (evidence_error) fail(evidence_error);

  std::vector<Statement> verified = std::move(initial->statements);
  std::move(evidence->statements.begin(), evidence->statements.end(), std::back_inserter(verified));
  record.traces.push_back(std::move(initial->trace));
  record.traces.push_back(std::move(evidence->trace));

  const auto t0 = Clock::now();
  try {
    RefineResult refined =
        stage_refine(query, passages, verified, backends.generator, &backends.verifier, config);
    record.final = std::move(refined.answer);
    record.traces.push_back(std::move(refined.trace));
  } catch (const StageFailure& e) {
    record.timings.refine_ms = elapsed_ms(t0);
    record.traces.push_back(e.partial());
    record.error = e.what();
    throw PipelineError(e, record);
  }
  record.timings.refine_ms = elapsed_ms(t0);
  return record;
}

}  // namespace citecheck
