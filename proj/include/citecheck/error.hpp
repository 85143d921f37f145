#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace citecheck {

enum class ErrorCode {
  EmptyQuery,
  EmptyPassageList,
  EmptyPassageText,
  InvalidCitationIndex,
  AlreadyAnnotated,
  EmptyPrompt,
  EmptyHypothesis,
  BackendUnavailable,
  BackendRefusal,
  UnmatchedScript,
  UnparseableVerdict,
  NoStatements,
  EmptyGold,
  EmptyAnswer,
  NoCitations,
  IncompleteTruthTable,
  FileNotFound,
  MalformedRecord,
  IoError,
  UnknownId,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace citecheck
