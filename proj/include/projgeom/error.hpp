#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace projgeom {

enum class ErrorKind {
  SyntaxError,
  UnknownVariable,
  UnknownFunction,
  DomainError,
  ContractViolation,
  VarianceMismatch,
  SlotOutOfRange,
  DimensionMismatch,
  SingularMetric,
  MissingJet,
  NotBianchi,
  NotAntisymmetric,
  HasTorsion,
  OddDimension,
  NotAlmostComplex,
  NotDominant,
  PathOutsideDomain,
  StepFailure,
  NotFlat,
  LeftDomain,
  ChartFormat,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Parse failure with the 1-based byte offset of the offending character.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorKind::SyntaxError, "at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        reason_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t offset_;
  std::string reason_;
};

}  // namespace projgeom
