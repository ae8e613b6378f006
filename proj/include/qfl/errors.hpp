#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qfl {

enum class ErrorCode {
  DivisionByZero,
  TowerMismatch,
  ZeroArgument,
  UnsupportedLevel,
  NotIntegralUnit,
  SingularForm,
  UnsupportedTower,
  BudgetExceeded,
  ZeroScalar,
  RuleNotApplicable,
  PreconditionSpanViolated,
  WitnessInvalid,
  FoldMismatch,
  ConfigUnsupported,
  NoGoodSlot,
  NotIsotropic,
  InvalidArgument,
  ParseError,
  Internal,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the DSL readers; carries the byte offset into the input and
// a description of what the reader expected there.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, std::string expected, const std::string& input)
      : Error(ErrorCode::ParseError, "at position " + std::to_string(position) + ": expected " +
                                         expected + " in '" + input + "'"),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qfl
