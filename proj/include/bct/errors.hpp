#pragma once

#include <stdexcept>
#include <string>

namespace bct {

enum class Errc {
  ZeroDivisor,
  Singular,
  NotInImage,
  BaseMismatch,
  IsotropicPlane,
  NotOnBoundary,
  ChartMismatch,
  NoPositiveRoot,
  DidNotConverge,
  LinearSolveFailure,
  NotIsotropic,
  NotReal,
  PathDependent,
  DegenerateFrame,
  NotUnimodular,
  NotDiagonalizable,
  ConfigError,
  StageFailure,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace bct
