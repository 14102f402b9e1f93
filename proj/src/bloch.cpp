#include "ttent/bloch.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

#include "ttent/errors.hpp"

namespace ttent {

namespace {

using cd = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

const std::array<Matrix2c, 3>& pauli() {
  static const std::array<Matrix2c, 3> s = [] {
    std::array<Matrix2c, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, cd(0, -1), cd(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return s;
}

HermitianMatrix4 kron(const Matrix2c& a, const Matrix2c& b) {
  HermitianMatrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// sigma_i x I, I x sigma_i and sigma_i x sigma_j, built once.
struct ProductBasis {
  std::array<HermitianMatrix4, 3> left;
  std::array<HermitianMatrix4, 3> right;
  std::array<std::array<HermitianMatrix4, 3>, 3> both;
};

const ProductBasis& product_basis() {
  static const ProductBasis basis = [] {
    ProductBasis pb;
    const Matrix2c id = Matrix2c::Identity();
    for (int i = 0; i < 3; ++i) {
      pb.left[i] = kron(pauli()[i], id);
      pb.right[i] = kron(id, pauli()[i]);
      for (int j = 0; j < 3; ++j) pb.both[i][j] = kron(pauli()[i], pauli()[j]);
    }
    return pb;
  }();
  return basis;
}

Eigen::SelfAdjointEigenSolver<HermitianMatrix4> eigensolve(const HermitianMatrix4& m) {
  const HermitianMatrix4 h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<HermitianMatrix4>(h);
}

// Square root of a PSD Hermitian matrix; eigenvalues below zero are noise and clipped.
HermitianMatrix4 psd_sqrt(const HermitianMatrix4& m) {
  const auto es = eigensolve(m);
  const Eigen::Vector4d root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.cast<cd>().asDiagonal() * es.eigenvectors().adjoint();
}

void require_physical(const TwoQubitState& state, double tol) {
  const double lmin = min_eigenvalue(state);
  if (lmin < -tol) {
    throw Error(ErrorKind::input_not_physical,
                "density matrix has eigenvalue " + std::to_string(lmin));
  }
}

}  // namespace

bool within_bloch_bounds(const TwoQubitState& state) {
  return state.b_plus.cwiseAbs().maxCoeff() <= 1.0 && state.b_minus.cwiseAbs().maxCoeff() <= 1.0 &&
         state.c.cwiseAbs().maxCoeff() <= 1.0;
}

HermitianMatrix4 assemble_density(const TwoQubitState& state) {
  const auto& pb = product_basis();
  HermitianMatrix4 rho = HermitianMatrix4::Identity();
  for (int i = 0; i < 3; ++i) {
    rho += state.b_plus[i] * pb.left[i] + state.b_minus[i] * pb.right[i];
    for (int j = 0; j < 3; ++j) rho += state.c(i, j) * pb.both[i][j];
  }
  return 0.25 * rho;
}

TwoQubitState bloch_coefficients(const HermitianMatrix4& rho, Basis basis) {
  const auto& pb = product_basis();
  const HermitianMatrix4 h = 0.5 * (rho + rho.adjoint());
  TwoQubitState s;
  s.basis = basis;
  for (int i = 0; i < 3; ++i) {
    s.b_plus[i] = (h * pb.left[i]).trace().real();
    s.b_minus[i] = (h * pb.right[i]).trace().real();
    for (int j = 0; j < 3; ++j) s.c(i, j) = (h * pb.both[i][j]).trace().real();
  }
  return s;
}

HermitianMatrix4 partial_transpose(const HermitianMatrix4& m) {
  HermitianMatrix4 out;
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * a, 2 * c) = m.block<2, 2>(2 * a, 2 * c).transpose();
  return out;
}

Eigen::Vector4d hermitian_eigenvalues(const HermitianMatrix4& m) {
  return eigensolve(m).eigenvalues();
}

double min_eigenvalue(const TwoQubitState& state) {
  return hermitian_eigenvalues(assemble_density(state))[0];
}

bool is_physical(const TwoQubitState& state, double tol) { return min_eigenvalue(state) >= -tol; }

bool is_entangled_ppt(const TwoQubitState& state, double tol) {
  require_physical(state, tol);
  const HermitianMatrix4 pt = partial_transpose(assemble_density(state));
  return hermitian_eigenvalues(pt)[0] < -tol;
}

double concurrence_wootters(const TwoQubitState& state, double tol) {
  require_physical(state, tol);
  const HermitianMatrix4 rho = assemble_density(state);
  const HermitianMatrix4 yy = product_basis().both[1][1];
  const HermitianMatrix4 flipped = yy * rho.conjugate() * yy;
  const HermitianMatrix4 root = psd_sqrt(rho);
  const HermitianMatrix4 inner = root * flipped * root;
  // eigenvalues of sqrt(inner) are the square roots of those of inner
  Eigen::Vector4d lambda = hermitian_eigenvalues(inner).cwiseMax(0.0).cwiseSqrt();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
  const double conc = lambda[0] - lambda[1] - lambda[2] - lambda[3];
  return std::clamp(conc, 0.0, 1.0);
}

double concurrence_diagonal(double c1, double c2, double c3) {
  constexpr double tol = 1e-12;
  if (c3 + std::abs(c1 + c2) - 1.0 > tol || -c3 + std::abs(c1 - c2) - 1.0 > tol) {
    throw Error(ErrorKind::not_physical_coefficients,
                "diag(" + std::to_string(c1) + ", " + std::to_string(c2) + ", " +
                    std::to_string(c3) + ") is not a physical correlation matrix");
  }
  const double singlet_branch = 0.5 * std::max(-c3 + std::abs(c1 + c2) - 1.0, 0.0);
  const double triplet_branch = 0.5 * std::max(c3 + std::abs(c1 - c2) - 1.0, 0.0);
  if (c3 == 0.0) {
    // both branches vanish on physical states
    assert(std::abs(singlet_branch - triplet_branch) <= tol);
    return std::max(singlet_branch, triplet_branch);
  }
  return c3 < 0.0 ? singlet_branch : triplet_branch;
}

SufficientCriteria sufficient_criteria(const TwoQubitState& state) {
  const Mat3& c = state.c;
  const double bz = state.b_plus[2] + state.b_minus[2];
  const double sum12 = c(0, 0) + c(1, 1);
  const double anti12 = c(1, 0) - c(0, 1);
  const double one_plus_c33 = 1.0 + c(2, 2);
  SufficientCriteria out{};
  out.p_general = bz * bz + sum12 * sum12 + anti12 * anti12 - one_plus_c33 * one_plus_c33;
  out.p_tilde = sum12 * sum12 - one_plus_c33 * one_plus_c33;
  out.delta = -c(2, 2) + std::abs(sum12) - 1.0;
  out.trace_criterion = -c.trace() - 1.0;
  return out;
}

double delta_axial(double c_perp, double c_z) { return -c_z + 2.0 * std::abs(c_perp) - 1.0; }

double ppt_axial(double c_perp, double c_z, double bz_plus, double bz_minus) {
  const double bz = bz_plus + bz_minus;
  return 4.0 * c_perp * c_perp + bz * bz - (1.0 + c_z) * (1.0 + c_z);
}

double fidelity(const HermitianMatrix4& a, const HermitianMatrix4& b) {
  const auto eb = eigensolve(b);
  const Eigen::Vector4d lb = eb.eigenvalues().cwiseMax(0.0);
  const HermitianMatrix4 b_clipped =
      eb.eigenvectors() * lb.cast<cd>().asDiagonal() * eb.eigenvectors().adjoint();
  const HermitianMatrix4 root = psd_sqrt(a);
  const Eigen::Vector4d mu = hermitian_eigenvalues(root * b_clipped * root).cwiseMax(0.0);
  const double tr = mu.cwiseSqrt().sum();
  return tr * tr;
}

}  // namespace ttent
