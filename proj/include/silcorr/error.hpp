#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace silcorr
{

enum class ErrorCode {
  // validation
  SpecInvariantViolation,
  UnreachableTrigger,
  ParseError,
  NonMonotonicTime,
  TooFewSamples,
  SchemaMismatch,
  EmptyLog,
  InvalidSampling,
  InconsistentScenario,
  InvalidConfig,
  Io,
  // analysis
  SignalAllAbsent,
  EventNotFound,
  DegenerateRange,
  NoCrossing,
  EmptyOverlap,
  ZeroVariance,
  DegenerateSampleSize,
  ZeroRMS,
  EmptyInput,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by bad inputs (CLI exit code 2); false for
/// errors raised while analysing valid inputs (exit code 3).
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message);

  ErrorCode code() const noexcept { return code_; }
  const std::string & stage() const noexcept { return stage_; }

  /// Returns a copy tagged with the pipeline stage it escaped from.
  Error with_stage(std::string stage) const;

private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace silcorr
