#ifndef CAUSALPROBE_ERRORS_HPP
#define CAUSALPROBE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causalprobe {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Expression text could not be parsed. Carries the byte offset of the
// failure and a description of what was expected there.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) +
              ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

// An identifier was applied as a function but names none.
class UnknownFunctionError : public Error {
 public:
  UnknownFunctionError(std::size_t offset, const std::string& name)
      : Error("unknown function '" + name + "' at offset " +
              std::to_string(offset)),
        offset_(offset),
        name_(name) {}

  std::size_t offset() const { return offset_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

// Static type mismatch in an expression (boolean operator applied to a
// real without a comparison, label used arithmetically, wrong arity).
class TypeError : public Error {
 public:
  using Error::Error;
};

// Graph construction or input validation failed (cycle, duplicate
// equation, undeclared variable, malformed file, bad flag value).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Runtime evaluation failed (missing exogenous value, domain violation,
// undefined metric).
class EvalError : public Error {
 public:
  using Error::Error;
};

// A hard combinatorial cap was exceeded (subset search past 2^20
// evaluations, path enumeration past 10^6 paths).
class CapExceededError : public Error {
 public:
  using Error::Error;
};

// Training loss became non-finite. Carries the step at which it happened.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step)
      : Error("training diverged (non-finite loss) at step " +
              std::to_string(step)),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace causalprobe

#endif
