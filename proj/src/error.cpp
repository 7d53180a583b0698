#include "silcorr/error.hpp"

namespace silcorr
{

std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::SpecInvariantViolation: return "SpecInvariantViolation";
    case ErrorCode::UnreachableTrigger: return "UnreachableTrigger";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::EmptyLog: return "EmptyLog";
    case ErrorCode::InvalidSampling: return "InvalidSampling";
    case ErrorCode::InconsistentScenario: return "InconsistentScenario";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    case ErrorCode::SignalAllAbsent: return "SignalAllAbsent";
    case ErrorCode::EventNotFound: return "EventNotFound";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateSampleSize: return "DegenerateSampleSize";
    case ErrorCode::ZeroRMS: return "ZeroRMS";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code)
{
  switch (code) {
    case ErrorCode::SpecInvariantViolation:
    case ErrorCode::UnreachableTrigger:
    case ErrorCode::ParseError:
    case ErrorCode::NonMonotonicTime:
    case ErrorCode::TooFewSamples:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::EmptyLog:
    case ErrorCode::InvalidSampling:
    case ErrorCode::InconsistentScenario:
    case ErrorCode::InvalidConfig:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string & message)
: std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

Error Error::with_stage(std::string stage) const
{
  Error tagged(code_, std::string(what()).substr(to_string(code_).size() + 2));
  tagged.stage_ = std::move(stage);
  return tagged;
}

}  // namespace silcorr
