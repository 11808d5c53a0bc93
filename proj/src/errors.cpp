#include "posethdx/errors.hpp"

namespace posethdx {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::BadArgs: return "BadArgs";
    case ErrorCode::NonPure: return "NonPure";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::DegenerateCover: return "DegenerateCover";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::NonStandardScheme: return "NonStandardScheme";
    case ErrorCode::MissingRegularity: return "MissingRegularity";
    case ErrorCode::MissingULReport: return "MissingULReport";
    case ErrorCode::ALViolated: return "ALViolated";
    case ErrorCode::TLViolated: return "TLViolated";
    case ErrorCode::NotMeanZero: return "NotMeanZero";
    case ErrorCode::NotInjective: return "NotInjective";
    case ErrorCode::HypothesesUnmet: return "HypothesesUnmet";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace posethdx
