#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksurf {

// Failure categories. Each carries the module that raised it so the CLI can
// map it onto an exit status.
enum class ErrorCode {
  Domain,              // argument outside the admissible range
  UnsupportedOrder,
  SingularPoint,       // regular-point formula evaluated at alpha' = 0
  NonAdmissibleCusp,
  Resolution,          // Fourier truncation too coarse
  Classification,      // operation needs a verdict the curve does not have
  InternalConsistency,
  Divergence,
  Extrapolation,       // evaluation outside the trusted strip
  Integrability,
  Parametrization,
  Horizon,             // Legendre transform with N_3 ~ 0
  GraphExtraction,
  Parse,
  OriginCrossing,
  DegenerateFace,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), code_(code), module_(std::move(module)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace ksurf
