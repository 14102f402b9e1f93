#include "ttent/errors.hpp"

namespace ttent {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "Usage";
    case ErrorKind::input_not_physical: return "InputNotPhysical";
    case ErrorKind::not_physical_coefficients: return "NotPhysicalCoefficients";
    case ErrorKind::below_threshold: return "BelowThreshold";
    case ErrorKind::degenerate_at_pole: return "DegenerateAtPole";
    case ErrorKind::zero_luminosity: return "ZeroLuminosity";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::non_monotonic_grid: return "NonMonotonicGrid";
    case ErrorKind::negative_luminosity: return "NegativeLuminosity";
    case ErrorKind::out_of_range: return "OutOfRange";
    case ErrorKind::empty_window: return "EmptyWindow";
    case ErrorKind::quadrature_no_convergence: return "QuadratureNoConvergence";
    case ErrorKind::no_sign_change: return "NoSignChange";
    case ErrorKind::envelope_failure: return "EnvelopeFailure";
    case ErrorKind::insufficient_events: return "InsufficientEvents";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
      return 1;
    case ErrorKind::parse_error:
    case ErrorKind::non_monotonic_grid:
    case ErrorKind::negative_luminosity:
    case ErrorKind::out_of_range:
    case ErrorKind::empty_window:
    case ErrorKind::zero_luminosity:
    case ErrorKind::below_threshold:
    case ErrorKind::insufficient_events:
      return 2;
    default:
      return 3;
  }
}

}  // namespace ttent
