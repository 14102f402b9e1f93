#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttent {

enum class ErrorKind {
  usage,
  input_not_physical,
  not_physical_coefficients,
  below_threshold,
  degenerate_at_pole,
  zero_luminosity,
  parse_error,
  non_monotonic_grid,
  negative_luminosity,
  out_of_range,
  empty_window,
  quadrature_no_convergence,
  no_sign_change,
  envelope_failure,
  insufficient_events,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit code for the CLI: 1 usage, 2 input data, 3 numeric failure.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ttent
