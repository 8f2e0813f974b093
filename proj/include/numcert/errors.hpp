#ifndef NUMCERT_ERRORS_HPP
#define NUMCERT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace numcert {

enum class ErrorKind {
  OutOfRange,
  OutOfDomain,
  NotTrue,
  ZeroValue,
  Divides,
  IsPrime,
  Composite,
  NotPrime,
  NoCertificate,
  BadChain,
  UnknownRule,
  UnboundVariable,
  ParseError,
  SchemaError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NotTrue: return "NotTrue";
    case ErrorKind::ZeroValue: return "ZeroValue";
    case ErrorKind::Divides: return "Divides";
    case ErrorKind::IsPrime: return "IsPrime";
    case ErrorKind::Composite: return "Composite";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NoCertificate: return "NoCertificate";
    case ErrorKind::BadChain: return "BadChain";
    case ErrorKind::UnknownRule: return "UnknownRule";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

/// Raised by synthesis, parsing and (de)serialization. The checker never
/// throws for an invalid proof; it returns a CheckResult instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A goal-text syntax error; position is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::ParseError,
              "at offset " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace numcert

#endif  // NUMCERT_ERRORS_HPP
