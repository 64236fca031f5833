#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <cmath>

#include "pursuit/numeric.hpp"
#include "pursuit/rng.hpp"

namespace pursuit {

// Unit vector on S^{d-1}.
struct Direction {
  Eigen::VectorXd coords;
  Eigen::Index dim() const { return coords.size(); }
};

inline Direction sample_sphere(int d, RngStream& rng) {
  require(d >= 2, "sample_sphere: d must be >= 2");
  Eigen::VectorXd v(d);
  double norm = 0.0;
  do {
    for (int j = 0; j < d; ++j) v[j] = rng.normal();
    norm = v.norm();
  } while (norm < 1e-100);
  return Direction{v / norm};
}

// Haar orthogonal matrix: QR of a Gaussian matrix with the R diagonal signs
// folded into Q.  Without the sign fix the distribution is not invariant.
inline Eigen::MatrixXd sample_haar(int d, RngStream& rng) {
  require(d >= 2, "sample_haar: d must be >= 2");
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd u = qr.householderQ();
  const Eigen::MatrixXd& qrmat = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    if (qrmat(j, j) < 0.0) u.col(j) = -u.col(j);
  }
  return u;
}

// Planar rotation by angle asin(eps) in the first two coordinates, padded
// with the identity.  delta = sqrt(1-eps^2) - 1 + eps^2/2 is the (signed,
// nonpositive) fourth-order defect of the cosine.
struct RotationPair {
  double eps = 0.0;
  Eigen::MatrixXd a_eps;
  double delta = 0.0;
};

inline RotationPair rotation_eps(double eps, int d) {
  require(eps > 0.0 && eps < 1.0, "rotation_eps: eps must lie in (0,1)");
  require(d >= 2, "rotation_eps: d must be >= 2");
  RotationPair rp;
  rp.eps = eps;
  const double c = std::sqrt(1.0 - eps * eps);
  rp.delta = c - 1.0 + 0.5 * eps * eps;
  rp.a_eps = Eigen::MatrixXd::Identity(d, d);
  rp.a_eps(0, 0) = c;
  rp.a_eps(0, 1) = eps;
  rp.a_eps(1, 0) = -eps;
  rp.a_eps(1, 1) = c;
  return rp;
}

// Q = K C2 K^T for K the first two columns of U: q_ij = u_i1 u_j2 - u_i2 u_j1.
inline Eigen::MatrixXd q_matrix(const Eigen::MatrixXd& u) {
  require(u.rows() == u.cols() && u.rows() >= 2, "q_matrix: need square d>=2 input");
  const Eigen::VectorXd c1 = u.col(0);
  const Eigen::VectorXd c2 = u.col(1);
  return c1 * c2.transpose() - c2 * c1.transpose();
}

// Closed forms for low moments of Haar orthogonal entries, used as Monte
// Carlo references.
namespace haar_moments {

inline double second(int /*i*/, int /*j*/, int d) { return 1.0 / d; }

// E[u_{ij} u_{rs} u_{ab} u_{lm}] assembled from the delta pattern.
inline double fourth(int i, int j, int r, int s, int a, int b, int l, int m, int d) {
  auto dd = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  const double dn = static_cast<double>(d);
  const double c_minus = -1.0 / ((dn - 1.0) * dn * (dn + 2.0));
  const double c_plus = (dn + 1.0) / ((dn - 1.0) * dn * (dn + 2.0));
  const double minus_part =
      dd(i, r) * dd(a, l) * dd(j, b) * dd(s, m) +
      dd(i, r) * dd(a, l) * dd(j, m) * dd(s, b) +
      dd(i, a) * dd(r, l) * dd(j, s) * dd(b, m) +
      dd(i, a) * dd(r, l) * dd(j, m) * dd(b, s) +
      dd(i, l) * dd(r, a) * dd(j, s) * dd(b, m) +
      dd(i, l) * dd(r, a) * dd(j, b) * dd(s, m);
  const double plus_part =
      dd(i, r) * dd(a, l) * dd(j, s) * dd(b, m) +
      dd(i, a) * dd(r, l) * dd(j, b) * dd(s, m) +
      dd(i, l) * dd(r, a) * dd(j, m) * dd(s, b);
  return c_minus * minus_part + c_plus * plus_part;
}

// E[q_ij q_lp] = 2/(d(d-1)) (delta_il delta_jp - delta_ip delta_jl).
inline double q_product(int i, int j, int l, int p, int d) {
  auto dd = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  const double dn = static_cast<double>(d);
  return 2.0 / (dn * (dn - 1.0)) * (dd(i, l) * dd(j, p) - dd(i, p) * dd(j, l));
}

}  // namespace haar_moments

}  // namespace pursuit
