#include "citecheck/error.hpp"

namespace citecheck {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::EmptyPassageList: return "EmptyPassageList";
    case ErrorCode::EmptyPassageText: return "EmptyPassageText";
    case ErrorCode::InvalidCitationIndex: return "InvalidCitationIndex";
    case ErrorCode::AlreadyAnnotated: return "AlreadyAnnotated";
    case ErrorCode::EmptyPrompt: return "EmptyPrompt";
    case ErrorCode::EmptyHypothesis: return "EmptyHypothesis";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::BackendRefusal: return "BackendRefusal";
    case ErrorCode::UnmatchedScript: return "UnmatchedScript";
    case ErrorCode::UnparseableVerdict: return "UnparseableVerdict";
    case ErrorCode::NoStatements: return "NoStatements";
    case ErrorCode::EmptyGold: return "EmptyGold";
    case ErrorCode::EmptyAnswer: return "EmptyAnswer";
    case ErrorCode::NoCitations: return "NoCitations";
    case ErrorCode::IncompleteTruthTable: return "IncompleteTruthTable";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace citecheck
