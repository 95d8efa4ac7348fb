#include "bct/errors.hpp"

namespace bct {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ZeroDivisor: return "ZeroDivisor";
    case Errc::Singular: return "Singular";
    case Errc::NotInImage: return "NotInImage";
    case Errc::BaseMismatch: return "BaseMismatch";
    case Errc::IsotropicPlane: return "IsotropicPlane";
    case Errc::NotOnBoundary: return "NotOnBoundary";
    case Errc::ChartMismatch: return "ChartMismatch";
    case Errc::NoPositiveRoot: return "NoPositiveRoot";
    case Errc::DidNotConverge: return "DidNotConverge";
    case Errc::LinearSolveFailure: return "LinearSolveFailure";
    case Errc::NotIsotropic: return "NotIsotropic";
    case Errc::NotReal: return "NotReal";
    case Errc::PathDependent: return "PathDependent";
    case Errc::DegenerateFrame: return "DegenerateFrame";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::NotDiagonalizable: return "NotDiagonalizable";
    case Errc::ConfigError: return "ConfigError";
    case Errc::StageFailure: return "StageFailure";
  }
  return "Unknown";
}

}  // namespace bct
