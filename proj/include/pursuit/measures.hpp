#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "pursuit/dataset.hpp"
#include "pursuit/numeric.hpp"
#include "pursuit/randsphere.hpp"

namespace pursuit {

// Projected sample with uniform mass 1/n per atom.  Ties stay as repeats.
struct EmpiricalMeasure {
  std::vector<double> atoms;  // sorted ascending

  std::size_t size() const { return atoms.size(); }
};

inline EmpiricalMeasure project(const Dataset& ds, const Direction& theta) {
  require(theta.dim() == ds.d(), "project: direction dimension mismatch");
  EmpiricalMeasure mu;
  const Eigen::VectorXd dots = ds.points * theta.coords;
  mu.atoms.assign(dots.data(), dots.data() + dots.size());
  std::sort(mu.atoms.begin(), mu.atoms.end());
  return mu;
}

inline void save_csv(const EmpiricalMeasure& mu, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write measure file: " + path);
  out.precision(17);
  for (double a : mu.atoms) out << a << '\n';
}

// Piecewise linear test function with constant continuation beyond the end
// knots.  Norm fields are certified: they are recomputed from the knots and
// values, never trusted from the caller.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values,
                    std::string id = "")
      : knots_(std::move(knots)), values_(std::move(values)), id_(std::move(id)) {
    require(!knots_.empty(), "PiecewiseLinearFn: need at least one knot");
    require(knots_.size() == values_.size(), "PiecewiseLinearFn: knots/values mismatch");
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      require(knots_[i] > knots_[i - 1], "PiecewiseLinearFn: knots must strictly increase");
    }
    for (double v : values_) require(std::isfinite(v), "PiecewiseLinearFn: non-finite value");
    recompute_norms();
  }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& id() const { return id_; }
  double sup_norm() const { return sup_norm_; }
  double lip_const() const { return lip_const_; }
  double bl_norm() const { return sup_norm_ + lip_const_; }

  double operator()(double x) const {
    if (x <= knots_.front()) return values_.front();
    if (x >= knots_.back()) return values_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - knots_[lo]) / (knots_[hi] - knots_[lo]);
    return values_[lo] + t * (values_[hi] - values_[lo]);
  }

  PiecewiseLinearFn scaled(double s, std::string new_id = "") const {
    std::vector<double> v = values_;
    for (double& x : v) x *= s;
    return PiecewiseLinearFn(knots_, std::move(v),
                             new_id.empty() ? id_ + "*scaled" : std::move(new_id));
  }

  PiecewiseLinearFn shifted_down(double c) const {
    std::vector<double> v = values_;
    for (double& x : v) x -= c;
    return PiecewiseLinearFn(knots_, std::move(v), id_);
  }

  void save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write function file: " + path);
    out << "knot,value\n";
    out.precision(17);
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      out << knots_[i] << ',' << values_[i] << '\n';
    }
  }

 private:
  void recompute_norms() {
    sup_norm_ = 0.0;
    for (double v : values_) sup_norm_ = std::max(sup_norm_, std::abs(v));
    lip_const_ = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      lip_const_ = std::max(lip_const_, std::abs(values_[i] - values_[i - 1]) /
                                            (knots_[i] - knots_[i - 1]));
    }
  }

  std::vector<double> knots_;
  std::vector<double> values_;
  std::string id_;
  double sup_norm_ = 0.0;
  double lip_const_ = 0.0;
};

struct GaussianSpec {
  double sigma = 1.0;  // mean is always zero
};

// (1/n) sum f(atom_i), fixed-order compensated.
inline double integrate(const EmpiricalMeasure& mu, const PiecewiseLinearFn& f) {
  require(!mu.atoms.empty(), "integrate: empty measure");
  std::vector<double> vals(mu.atoms.size());
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) vals[i] = f(mu.atoms[i]);
  return pairwise_sum(vals) / static_cast<double>(mu.atoms.size());
}

// Exact E f(sigma Z) for piecewise linear f: on each segment
// int_a^b (alpha x + beta) dN(0,s^2) = alpha s^2 (phi_s(a) - phi_s(b))
//                                     + beta (Phi_s(b) - Phi_s(a)),
// plus the constant tails.
inline double gaussian_expectation(const PiecewiseLinearFn& f, const GaussianSpec& g) {
  require(g.sigma > 0.0 && std::isfinite(g.sigma), "gaussian_expectation: sigma > 0");
  const auto& k = f.knots();
  const auto& v = f.values();
  const double s = g.sigma;
  CompensatedSum acc;
  acc.add(v.front() * normal::cdf_scaled(k.front(), s));
  acc.add(v.back() * (1.0 - normal::cdf_scaled(k.back(), s)));
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double a = k[i];
    const double b = k[i + 1];
    const double alpha = (v[i + 1] - v[i]) / (b - a);
    const double beta = v[i] - alpha * a;
    acc.add(alpha * s * s * (normal::pdf_scaled(a, s) - normal::pdf_scaled(b, s)));
    acc.add(beta * (normal::cdf_scaled(b, s) - normal::cdf_scaled(a, s)));
  }
  return acc.value();
}

namespace detail {

inline PiecewiseLinearFn make_hat(double center, double halfwidth, double peak,
                                  std::string id) {
  return PiecewiseLinearFn({center - halfwidth, center, center + halfwidth},
                           {0.0, peak, 0.0}, std::move(id));
}

}  // namespace detail

// Fixed registry of test functions in the unit ball of sup + Lipschitz
// norm.  IDs are stable; the table never depends on runtime state.
inline const std::vector<PiecewiseLinearFn>& builtin_test_functions() {
  static const std::vector<PiecewiseLinearFn> registry = [] {
    std::vector<PiecewiseLinearFn> fns;
    // clamp(x/2) to +-1/2: sup 1/2, lip 1/2; unit ball boundary.
    fns.emplace_back(std::vector<double>{-1.0, 1.0}, std::vector<double>{-0.5, 0.5},
                     "clamp_half");
    // wider clamp, gentler slope
    fns.emplace_back(std::vector<double>{-3.0, 3.0}, std::vector<double>{-0.75, 0.75},
                     "clamp_wide");
    fns.push_back(detail::make_hat(0.0, 1.0, 0.5, "hat_unit"));
    fns.push_back(detail::make_hat(0.0, 1.0, -0.5, "valley_unit"));
    fns.push_back(detail::make_hat(1.0, 3.0, 0.75, "hat_off_center"));
    // symmetric staircase, slopes 1/2, plateaus at 0 and +-1/2
    fns.emplace_back(
        std::vector<double>{-3.0, -2.0, -1.0, 1.0, 2.0, 3.0},
        std::vector<double>{-0.5, -0.5, 0.0, 0.0, 0.5, 0.5}, "staircase");
    // dense piecewise-linear sample of cos(x)/2 on [-8, 8]; chord slopes of
    // cos/2 never exceed 1/2, so the certified norm stays within the ball.
    {
      std::vector<double> knots;
      std::vector<double> values;
      const int m = 256;
      for (int i = 0; i <= m; ++i) {
        const double x = -8.0 + 16.0 * static_cast<double>(i) / m;
        knots.push_back(x);
        values.push_back(0.5 * std::cos(x));
      }
      fns.emplace_back(std::move(knots), std::move(values), "half_cos");
    }
    return fns;
  }();
  return registry;
}

}  // namespace pursuit
