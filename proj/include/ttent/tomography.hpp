#pragma once

// Moment estimators for B+, B-, C and D from dilepton events, projection onto
// the physical state space, and the D-witness significance.

#include <string>
#include <vector>

#include "ttent/bloch.hpp"
#include "ttent/events.hpp"

namespace ttent {

/// Number of fitted parameters.
enum class AssumptionLevel { lo_symmetric = 2, symmetric = 4, general = 15 };

/// Throws Usage for anything other than 2, 4, 15.
AssumptionLevel assumption_level_from_int(int level);

struct Parameter {
  std::string name;
  double value;
  double error;
};

struct TomographyResult {
  TwoQubitState raw_state;
  TwoQubitState projected_state;
  std::size_t n_events = 0;
  Vec3 b_plus_err = Vec3::Zero();
  Vec3 b_minus_err = Vec3::Zero();
  Mat3 c_err = Mat3::Zero();
  AssumptionLevel assumption_level = AssumptionLevel::general;
  /// The fitted parameters of the chosen level, with standard errors.
  std::vector<Parameter> parameters;
};

/// B+ = 3<q+>, B- = -3<q->, C_ij = -9<q+_i q-_j>; standard errors from the
/// sample spread. Throws InsufficientEvents for n < 2.
TomographyResult estimate_moments(const std::vector<DileptonEvent>& events);

/// Closest physical state in Frobenius norm: negative eigenvalues of rho are
/// removed and the deficit is spread uniformly over the rest.
TwoQubitState project_physical(const TwoQubitState& raw);

struct DEstimate {
  double d;
  double std_err;
};

/// D = -3 <q+.q->. Throws InsufficientEvents.
DEstimate estimate_D(const std::vector<DileptonEvent>& events);

struct Significance {
  double n_sigma;
  /// D + 1/3; negative values witness entanglement.
  double witness;
};

/// |d + 1/3| / (rel_unc |d|) when d < -1/3, else 0. Throws Usage if rel_unc <= 0.
Significance significance(double d, double rel_unc);

/// Fits only the parameters of `level` (symmetric levels force
/// C_xx = C_yy = C_perp and zero off-diagonals), then projects.
TomographyResult tomography_report(const std::vector<DileptonEvent>& events, AssumptionLevel level);

/// JSON document with schema "ttent.tomography/1".
std::string to_json(const TomographyResult& result);
/// Throws ParseError on schema mismatch.
TomographyResult tomography_from_json(const std::string& text);

}  // namespace ttent
