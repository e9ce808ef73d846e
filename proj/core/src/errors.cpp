#include "jjtrench/errors.hpp"

namespace jjtrench {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation:
      return 2;
    case ErrorKind::Computation:
      return 3;
    case ErrorKind::Io:
      return 4;
  }
  return 1;
}

Error::Error(ErrorKind kind, std::string name, const std::string& message)
    : std::runtime_error(name + ": " + message), kind_(kind), name_(std::move(name)), message_(message) {}

TraceTooShort::TraceTooShort(std::size_t have, std::size_t need)
    : Error(ErrorKind::Validation, "TraceTooShort",
            "trace has " + std::to_string(have) + " samples, need at least " +
                std::to_string(need)) {}

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(ErrorKind::Validation, "ParseError",
            source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace jjtrench
