#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ucfg {

enum class Errc {
  Parse,         // malformed text input
  Validation,    // structurally invalid object
  Budget,        // enumeration budget exceeded
  Ambiguity,     // an unambiguity promise was falsified
  Precondition,  // caller violated an operation's precondition
  Domain,        // numeric argument outside the admissible range
  Io,
  Usage,
};

const char* errc_name(Errc code);

/// Every failure raised by the library. `code()` is module-qualified, e.g.
/// "lang.parse" or "counting.ambiguity", and ends up verbatim in CLI reports.
class Error : public std::runtime_error {
 public:
  Error(Errc kind, std::string module, const std::string& message);

  Errc kind() const { return kind_; }
  const std::string& module() const { return module_; }
  std::string code() const { return module_ + "." + errc_name(kind_); }

 private:
  Errc kind_;
  std::string module_;
};

/// Raised when a count exceeds what an unambiguous object could produce, or
/// when an explicit lint finds a word with two derivations/runs.
class AmbiguityDetected : public Error {
 public:
  AmbiguityDetected(std::string module, const std::string& message,
                    std::optional<int> length = std::nullopt)
      : Error(Errc::Ambiguity, std::move(module), message), length_(length) {}

  std::optional<int> length() const { return length_; }

 private:
  std::optional<int> length_;
};

}  // namespace ucfg
