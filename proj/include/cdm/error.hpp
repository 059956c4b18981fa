#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdm {

/// Broad failure classes. The CLI maps each to its exit code.
enum class ErrorCategory {
  validation,    ///< bad input, schema or invariant violation
  fabrication,   ///< design cannot be made on the given stock
  solver,        ///< numerical non-convergence or divergence
  budget,        ///< plan exceeds its power budget
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Raised when a CSG difference reaches a mesh-producing operation.
class UnsupportedBoolean : public Error {
 public:
  explicit UnsupportedBoolean(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Parse or evaluation failure in DSL source; carries a 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCategory::validation,
              "line " + std::to_string(line) + ": " + message),
        line_(line),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class FabricationError : public Error {
 public:
  explicit FabricationError(const std::string& what)
      : Error(ErrorCategory::fabrication, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what)
      : Error(ErrorCategory::solver, what) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t step, const std::string& what)
      : Error(ErrorCategory::solver, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what)
      : Error(ErrorCategory::budget, what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace detail
}  // namespace cdm
