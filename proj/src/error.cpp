#include "ksurf/error.hpp"

namespace ksurf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::UnsupportedOrder: return "unsupported-order";
    case ErrorCode::SingularPoint: return "singular-point";
    case ErrorCode::NonAdmissibleCusp: return "non-admissible-cusp";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::Classification: return "classification";
    case ErrorCode::InternalConsistency: return "internal-consistency";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Extrapolation: return "extrapolation";
    case ErrorCode::Integrability: return "integrability";
    case ErrorCode::Parametrization: return "parametrization";
    case ErrorCode::Horizon: return "horizon";
    case ErrorCode::GraphExtraction: return "graph-extraction";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::OriginCrossing: return "origin-crossing";
    case ErrorCode::DegenerateFace: return "degenerate-face";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace ksurf
