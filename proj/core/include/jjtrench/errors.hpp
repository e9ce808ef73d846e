#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jjtrench {

/// Broad failure class; the CLI maps each to a process exit code.
enum class ErrorKind {
  Validation,   // bad input values or files (exit 2)
  Computation,  // numerics could not produce a result (exit 3)
  Io,           // filesystem trouble (exit 4)
};

int exit_code_for(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable error name, e.g. "SameSideDeposition".
  const std::string& name() const noexcept { return name_; }
  /// Message without the name prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string name_;
  std::string message_;
};

// Validation-class errors.

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorKind::Validation, "DomainError", message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::Validation, "ValidationError", message) {}
};

class SameSideDeposition : public Error {
 public:
  explicit SameSideDeposition(const std::string& message)
      : Error(ErrorKind::Validation, "SameSideDeposition", message) {}
};

class TraceTooShort : public Error {
 public:
  TraceTooShort(std::size_t have, std::size_t need);
};

class EmptyTrace : public Error {
 public:
  explicit EmptyTrace(const std::string& message)
      : Error(ErrorKind::Validation, "EmptyTrace", message) {}
};

class GapError : public Error {
 public:
  GapError(const std::string& message, std::vector<std::size_t> rows)
      : Error(ErrorKind::Validation, "GapError", message), rows_(std::move(rows)) {}
  /// Zero-based data row indices whose spacing breaks uniform sampling.
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& message);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class MissingSection : public Error {
 public:
  explicit MissingSection(const std::string& section)
      : Error(ErrorKind::Validation, "MissingSection",
              "config has no [" + section + "] section") {}
};

// Computation-class errors.

class UnphysicalDephasing : public Error {
 public:
  explicit UnphysicalDephasing(const std::string& message)
      : Error(ErrorKind::Computation, "UnphysicalDephasing", message) {}
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& message)
      : Error(ErrorKind::Computation, "NonConvergence", message) {}
};

class DegenerateData : public Error {
 public:
  explicit DegenerateData(const std::string& message)
      : Error(ErrorKind::Computation, "DegenerateData", message) {}
};

class AmbiguousFrequency : public Error {
 public:
  explicit AmbiguousFrequency(const std::string& message)
      : Error(ErrorKind::Computation, "AmbiguousFrequency", message) {}
};

class ZeroMedian : public Error {
 public:
  ZeroMedian() : Error(ErrorKind::Computation, "ZeroMedian", "median is zero; RCV undefined") {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::Io, "IoError", message) {}
};

}  // namespace jjtrench
