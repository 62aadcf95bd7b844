#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hodgefaas {

// Stable error categories; the CLI maps them onto exit codes.
enum class ErrorCategory {
  kValidation = 1,
  kInput = 2,
  kNumerical = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Structural problem with a complex description, a flow, or a spec.
/// Carries every finding, not just the first one.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> findings)
      : Error(ErrorCategory::kValidation, join(findings)),
        findings_(std::move(findings)) {}
  explicit ValidationError(const std::string& finding)
      : ValidationError(std::vector<std::string>{finding}) {}

  const std::vector<std::string>& findings() const noexcept { return findings_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> findings_;
};

/// I/O failures and malformed input files.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

/// Numerical inconsistency, e.g. two rank computations that disagree.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCategory::kNumerical, what) {}
};

}  // namespace hodgefaas
