#include "ttent/tomography.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"
#include "ttent/errors.hpp"

namespace ttent {

namespace {

// Per-event observables: q+ (0..2), q- (3..5), q+_i q-_j row-major (6..14),
// (q+_x q-_x + q+_y q-_y) / 2 (15), q+.q- (16).
constexpr int kObs = 17;
constexpr int kPerpObs = 15;
constexpr int kCosObs = 16;

struct Moments {
  std::array<double, kObs> mean{};
  std::array<double, kObs> se{};
  std::size_t n = 0;
};

Moments accumulate(const std::vector<DileptonEvent>& events) {
  if (events.size() < 2) {
    throw Error(ErrorKind::insufficient_events, "need at least 2 events, got " + std::to_string(events.size()));
  }
  std::array<double, kObs> sum{};
  std::array<double, kObs> sum_sq{};
  std::array<double, kObs> x{};
  for (const DileptonEvent& e : events) {
    for (int i = 0; i < 3; ++i) {
      x[i] = e.q_plus[i];
      x[3 + i] = e.q_minus[i];
      for (int j = 0; j < 3; ++j) x[6 + 3 * i + j] = e.q_plus[i] * e.q_minus[j];
    }
    x[kPerpObs] = 0.5 * (x[6] + x[10]);
    x[kCosObs] = x[6] + x[10] + x[14];
    for (int k = 0; k < kObs; ++k) {
      sum[k] += x[k];
      sum_sq[k] += x[k] * x[k];
    }
  }
  Moments m;
  m.n = events.size();
  const double n = static_cast<double>(m.n);
  for (int k = 0; k < kObs; ++k) {
    m.mean[k] = sum[k] / n;
    const double var = std::max(0.0, (sum_sq[k] - n * m.mean[k] * m.mean[k]) / (n - 1.0));
    m.se[k] = std::sqrt(var / n);
  }
  return m;
}

const char* axis_name(int i) { return i == 0 ? "x" : (i == 1 ? "y" : "z"); }

nlohmann::json state_json(const TwoQubitState& s) {
  nlohmann::json c = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) c.push_back({s.c(i, 0), s.c(i, 1), s.c(i, 2)});
  return {{"b_plus", {s.b_plus[0], s.b_plus[1], s.b_plus[2]}},
          {"b_minus", {s.b_minus[0], s.b_minus[1], s.b_minus[2]}},
          {"c", c}};
}

Vec3 vec_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::parse_error, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Mat3 mat_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::parse_error, "expected a 3x3 matrix");
  Mat3 m;
  for (int i = 0; i < 3; ++i) m.row(i) = vec_from(j[i]).transpose();
  return m;
}

TwoQubitState state_from(const nlohmann::json& j) {
  TwoQubitState s;
  s.b_plus = vec_from(j.at("b_plus"));
  s.b_minus = vec_from(j.at("b_minus"));
  s.c = mat_from(j.at("c"));
  s.basis = Basis::beam;
  return s;
}

}  // namespace

AssumptionLevel assumption_level_from_int(int level) {
  switch (level) {
    case 2: return AssumptionLevel::lo_symmetric;
    case 4: return AssumptionLevel::symmetric;
    case 15: return AssumptionLevel::general;
    default: throw Error(ErrorKind::usage, "assumption level must be 2, 4 or 15");
  }
}

TomographyResult estimate_moments(const std::vector<DileptonEvent>& events) {
  const Moments m = accumulate(events);
  TomographyResult r;
  r.n_events = m.n;
  r.assumption_level = AssumptionLevel::general;
  TwoQubitState& s = r.raw_state;
  s.basis = Basis::beam;
  for (int i = 0; i < 3; ++i) {
    s.b_plus[i] = 3.0 * m.mean[i];
    s.b_minus[i] = -3.0 * m.mean[3 + i];
    r.b_plus_err[i] = 3.0 * m.se[i];
    r.b_minus_err[i] = 3.0 * m.se[3 + i];
    for (int j = 0; j < 3; ++j) {
      s.c(i, j) = -9.0 * m.mean[6 + 3 * i + j];
      r.c_err(i, j) = 9.0 * m.se[6 + 3 * i + j];
    }
  }
  for (int i = 0; i < 3; ++i) r.parameters.push_back({std::string("B+_") + axis_name(i), s.b_plus[i], r.b_plus_err[i]});
  for (int i = 0; i < 3; ++i) r.parameters.push_back({std::string("B-_") + axis_name(i), s.b_minus[i], r.b_minus_err[i]});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.parameters.push_back({std::string("C_") + axis_name(i) + axis_name(j), s.c(i, j), r.c_err(i, j)});
  r.projected_state = project_physical(s);
  return r;
}

TwoQubitState project_physical(const TwoQubitState& raw) {
  const HermitianMatrix4 rho = assemble_density(raw);
  const Eigen::SelfAdjointEigenSolver<HermitianMatrix4> es(0.5 * (rho + rho.adjoint()));
  // eigenvalues ascending; walk up from the most negative
  Eigen::Vector4d lambda = es.eigenvalues();
  const double trace = lambda.sum();
  lambda /= trace;
  double deficit = 0.0;
  int first = 0;
  while (first < 4 && lambda[first] + deficit / (4 - first) < 0.0) {
    deficit += lambda[first];
    lambda[first] = 0.0;
    ++first;
  }
  for (int i = first; i < 4; ++i) lambda[i] += deficit / (4 - first);
  const HermitianMatrix4 fixed =
      es.eigenvectors() * lambda.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
  return bloch_coefficients(fixed, raw.basis);
}

DEstimate estimate_D(const std::vector<DileptonEvent>& events) {
  if (events.size() < 2) {
    throw Error(ErrorKind::insufficient_events, "need at least 2 events, got " + std::to_string(events.size()));
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const DileptonEvent& e : events) {
    const double c = e.q_plus.dot(e.q_minus);
    sum += c;
    sum_sq += c * c;
  }
  const double n = static_cast<double>(events.size());
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {-3.0 * mean, 3.0 * std::sqrt(var / n)};
}

Significance significance(double d, double rel_unc) {
  if (!(rel_unc > 0.0)) throw Error(ErrorKind::usage, "relative uncertainty must be positive");
  const double witness = d + 1.0 / 3.0;
  if (!(witness < 0.0)) return {0.0, witness};
  return {-witness / (rel_unc * std::abs(d)), witness};
}

TomographyResult tomography_report(const std::vector<DileptonEvent>& events, AssumptionLevel level) {
  if (level == AssumptionLevel::general) return estimate_moments(events);
  const Moments m = accumulate(events);
  TomographyResult r;
  r.n_events = m.n;
  r.assumption_level = level;
  TwoQubitState& s = r.raw_state;
  s.basis = Basis::beam;
  const double c_perp = -9.0 * m.mean[kPerpObs];
  const double c_perp_err = 9.0 * m.se[kPerpObs];
  const double c_z = -9.0 * m.mean[14];
  const double c_z_err = 9.0 * m.se[14];
  s.c(0, 0) = s.c(1, 1) = c_perp;
  s.c(2, 2) = c_z;
  r.c_err(0, 0) = r.c_err(1, 1) = c_perp_err;
  r.c_err(2, 2) = c_z_err;
  if (level == AssumptionLevel::symmetric) {
    s.b_plus[2] = 3.0 * m.mean[2];
    s.b_minus[2] = -3.0 * m.mean[5];
    r.b_plus_err[2] = 3.0 * m.se[2];
    r.b_minus_err[2] = 3.0 * m.se[5];
    r.parameters.push_back({"B+_z", s.b_plus[2], r.b_plus_err[2]});
    r.parameters.push_back({"B-_z", s.b_minus[2], r.b_minus_err[2]});
  }
  r.parameters.push_back({"C_perp", c_perp, c_perp_err});
  r.parameters.push_back({"C_z", c_z, c_z_err});
  r.projected_state = project_physical(s);
  return r;
}

std::string to_json(const TomographyResult& r) {
  nlohmann::json params = nlohmann::json::array();
  for (const Parameter& p : r.parameters) params.push_back({{"name", p.name}, {"value", p.value}, {"error", p.error}});
  TwoQubitState errors;
  errors.b_plus = r.b_plus_err;
  errors.b_minus = r.b_minus_err;
  errors.c = r.c_err;
  const nlohmann::json j = {
      {"schema", "ttent.tomography/1"},
      {"assumption_level", static_cast<int>(r.assumption_level)},
      {"n_events", r.n_events},
      {"parameters", params},
      {"raw", state_json(r.raw_state)},
      {"errors", state_json(errors)},
      {"projected", state_json(r.projected_state)},
      {"D_projected", r.projected_state.d_observable()},
      {"concurrence_projected", concurrence_wootters(r.projected_state)},
      {"entangled_projected", is_entangled_ppt(r.projected_state)},
  };
  return j.dump(2) + "\n";
}

TomographyResult tomography_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema") != "ttent.tomography/1") {
      throw Error(ErrorKind::parse_error, "unexpected schema " + j.at("schema").dump());
    }
    TomographyResult r;
    r.assumption_level = assumption_level_from_int(j.at("assumption_level").get<int>());
    r.n_events = j.at("n_events").get<std::size_t>();
    for (const auto& p : j.at("parameters")) {
      r.parameters.push_back({p.at("name").get<std::string>(), p.at("value").get<double>(),
                              p.at("error").get<double>()});
    }
    r.raw_state = state_from(j.at("raw"));
    r.projected_state = state_from(j.at("projected"));
    const TwoQubitState errors = state_from(j.at("errors"));
    r.b_plus_err = errors.b_plus;
    r.b_minus_err = errors.b_minus;
    r.c_err = errors.c;
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse_error, std::string("tomography JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::usage) throw Error(ErrorKind::parse_error, e.what());
    throw;
  }
}

}  // namespace ttent
