#include "projgeom/error.hpp"

namespace projgeom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ContractViolation: return "ContractViolation";
    case ErrorKind::VarianceMismatch: return "VarianceMismatch";
    case ErrorKind::SlotOutOfRange: return "SlotOutOfRange";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::MissingJet: return "MissingJet";
    case ErrorKind::NotBianchi: return "NotBianchi";
    case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
    case ErrorKind::HasTorsion: return "HasTorsion";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::NotAlmostComplex: return "NotAlmostComplex";
    case ErrorKind::NotDominant: return "NotDominant";
    case ErrorKind::PathOutsideDomain: return "PathOutsideDomain";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::NotFlat: return "NotFlat";
    case ErrorKind::LeftDomain: return "LeftDomain";
    case ErrorKind::ChartFormat: return "ChartFormat";
  }
  return "Error";
}

}  // namespace projgeom
