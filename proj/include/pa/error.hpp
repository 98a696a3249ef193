#pragma once

#include <stdexcept>
#include <string>

namespace pa {

enum class ErrorCode {
  MixedField,
  DivisionByZero,
  ParseError,
  InconsistentMu,
  RowSumMismatch,
  NotConnected,
  TruncationTooSmall,
  NotTransitive,
  EigenvectorNotInField,
  SizeMismatch,
  SignMismatch,
  ApproximateOnly,
  NotUnitary,
  NotAutomorphism,
  WeightNotPreserved,
  CenterSplitFailure,
  NotNonnegative,
  KMismatch,
  KOverflow,
  ElementNotRepresentable,
  NotBiInvariant,
  NotUnital,
  OrbitNotRepresentable,
  IndexInfinite,
  ScopeTooSmall,
  AxiomFailure,
  NotTracePreserving,
  InvalidParameters,
  NotSubfactorCandidate,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pa
