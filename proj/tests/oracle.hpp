#pragma once

// Test-only reference implementations. Nothing here calls into the library
// routine it is used to check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ttent/bloch.hpp"

namespace oracle {

using cd = std::complex<double>;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;

  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

// Composite Gauss-Legendre with `panels` equal panels of order 20.
template <class F>
double integrate(const F& f, double a, double b, int panels = 64) {
  static const GaussLegendre gl(20);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    double s = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * f(lo + 0.5 * h * (gl.x[i] + 1.0));
    total += 0.5 * h * s;
  }
  return total;
}

// Density matrix from Bloch data, element by element:
// <ab|rho|cd> = [d_ac d_bd + B+_i s_i(a,c) d_bd + B-_i d_ac s_i(b,d) + C_ij s_i(a,c) s_j(b,d)] / 4.
inline Eigen::Matrix4cd density(const ttent::TwoQubitState& s) {
  const cd sig[3][2][2] = {{{0, 1}, {1, 0}}, {{0, cd(0, -1)}, {cd(0, 1), 0}}, {{1, 0}, {0, -1}}};
  Eigen::Matrix4cd rho;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const double dac = a == c ? 1.0 : 0.0;
          const double dbd = b == d ? 1.0 : 0.0;
          cd v = dac * dbd;
          for (int i = 0; i < 3; ++i) {
            v += s.b_plus[i] * sig[i][a][c] * dbd + s.b_minus[i] * dac * sig[i][b][d];
            for (int j = 0; j < 3; ++j) v += s.c(i, j) * sig[i][a][c] * sig[j][b][d];
          }
          rho(2 * a + b, 2 * c + d) = 0.25 * v;
        }
  return rho;
}

// Bloch coefficients by explicit traces against the element formula above.
inline ttent::TwoQubitState bloch(const Eigen::Matrix4cd& rho) {
  ttent::TwoQubitState s;
  auto probe = [&](const ttent::TwoQubitState& unit) {
    return (rho * density(unit)).trace().real() * 4.0 - 1.0;
  };
  for (int i = 0; i < 3; ++i) {
    ttent::TwoQubitState u;
    u.b_plus[i] = 1.0;
    s.b_plus[i] = probe(u);
    u = {};
    u.b_minus[i] = 1.0;
    s.b_minus[i] = probe(u);
    for (int j = 0; j < 3; ++j) {
      u = {};
      u.c(i, j) = 1.0;
      s.c(i, j) = probe(u);
    }
  }
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

 private:
  std::mt19937_64 eng_;
};

// rho = G G^dagger / tr with G a 4 x rank complex Gaussian matrix.
inline Eigen::Matrix4cd ginibre(Rng& rng, int rank) {
  Eigen::MatrixXcd g(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cd(rng.normal(), rng.normal());
  Eigen::Matrix4cd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// p |psi><psi| + (1 - p) I/4.
inline Eigen::Matrix4cd noisy_pure(Rng& rng) {
  Eigen::Vector4cd psi;
  for (int i = 0; i < 4; ++i) psi[i] = cd(rng.normal(), rng.normal());
  psi.normalize();
  const double p = rng.uniform();
  return p * psi * psi.adjoint() + (1.0 - p) * Eigen::Matrix4cd::Identity() / 4.0;
}

// Mixture of full-rank, rank-2 and noisy pure states; covers both sides of
// the separability boundary.
inline ttent::TwoQubitState random_state(Rng& rng, int kind) {
  switch (kind % 3) {
    case 0: return bloch(ginibre(rng, 4));
    case 1: return bloch(ginibre(rng, 2));
    default: return bloch(noisy_pure(rng));
  }
}

// Smallest eigenvalue of the density matrix built by `density`.
inline double min_eig(const ttent::TwoQubitState& s) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(density(s)).eigenvalues()[0];
}

// Uniform draw from the physical region of diag(c1, c2, c3) by cube rejection.
inline Eigen::Vector3d random_diagonal(Rng& rng) {
  while (true) {
    const Eigen::Vector3d c(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    ttent::TwoQubitState s;
    s.c = c.asDiagonal();
    if (min_eig(s) >= 0.0) return c;
  }
}

// Leading-order coefficients at (beta, cos), helicity order (k, r, n), with
// sin(2 theta)^2 and sin^4 written out from c alone.
struct Lo {
  double a, kk, rr, nn, kr;
};

inline Lo lo_qq(double b, double c) {
  const double s2 = 1.0 - c * c;
  return {(2.0 - b * b * s2) / 18.0, (2.0 * c * c + b * b * s2) / 18.0, (2.0 - b * b) * s2 / 18.0,
          -b * b * s2 / 18.0, std::sqrt(1.0 - b * b) * 2.0 * c * std::sqrt(s2) / 18.0};
}

inline Lo lo_gg(double b, double c) {
  const double b2 = b * b;
  const double s2 = 1.0 - c * c;
  const double f = (7.0 + 9.0 * b2 * c * c) / (192.0 * std::pow(1.0 - b2 * c * c, 2));
  const double q = 1.0 + s2 * s2;
  return {f * (1.0 + 2.0 * b2 * s2 - b2 * b2 * q), -f * (1.0 - 2.0 * b2 * s2 * c * c - b2 * b2 * q),
          -f * (1.0 - 2.0 * b2 * q + b2 * b2 * q), -f * (1.0 - 2.0 * b2 + b2 * b2 * q),
          f * std::sqrt(1.0 - b2) * b2 * 2.0 * c * std::sqrt(s2) * s2};
}

}  // namespace oracle
