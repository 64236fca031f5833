#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pursuit/numeric.hpp"
#include "pursuit/rng.hpp"

namespace pursuit {

// Deterministic point cloud; rows are points.  Immutable after construction.
struct Dataset {
  Eigen::MatrixXd points;  // n x d
  std::string label;

  Eigen::Index n() const { return points.rows(); }
  Eigen::Index d() const { return points.cols(); }

  void validate() const {
    require(points.rows() >= 1, "Dataset: need at least one point");
    require(points.cols() >= 2, "Dataset: ambient dimension must be >= 2");
    require(points.allFinite(), "Dataset: coordinates must be finite");
  }
};

// Scale constants of the cloud.  b_const is an upper-biased certificate:
// the Rayleigh estimate plus its residual norm, so the true spectral value
// never exceeds what is reported.
struct ConditionSummary {
  double sigma2 = 0.0;
  double a_const = 0.0;
  double b_const = 0.0;
  double b_residual = 0.0;  // achieved relative residual of the eigen solve
  Eigen::Index d = 0;
  Eigen::Index n = 0;
};

enum class DatasetKind { kCube, kGaussian, kOrthobasis, kLine, kClustered };

inline const char* to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::kCube: return "cube";
    case DatasetKind::kGaussian: return "gaussian";
    case DatasetKind::kOrthobasis: return "orthobasis";
    case DatasetKind::kLine: return "line";
    case DatasetKind::kClustered: return "clustered";
  }
  return "?";
}

inline DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "cube") return DatasetKind::kCube;
  if (s == "gaussian") return DatasetKind::kGaussian;
  if (s == "orthobasis") return DatasetKind::kOrthobasis;
  if (s == "line") return DatasetKind::kLine;
  if (s == "clustered") return DatasetKind::kClustered;
  throw std::invalid_argument("unknown dataset kind: " + s);
}

namespace detail {

inline double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  // trim ascii whitespace
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t' ||
                           cell.front() == '\r')) {
    cell.remove_prefix(1);
  }
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' ||
                           cell.back() == '\r')) {
    cell.remove_suffix(1);
  }
  double v = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || cell.empty()) {
    std::ostringstream os;
    os << "csv parse error at row " << row << ", column " << col
       << ": not a number: '" << std::string(cell) << "'";
    throw std::runtime_error(os.str());
  }
  return v;
}

}  // namespace detail

// One point per row, comma separated, no header.  Values parse to the
// nearest double.  Ragged rows and non-numeric cells are hard errors.
inline Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t col = 1;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      row.push_back(detail::parse_cell(
          std::string_view(line).substr(start, end - start), lineno, col));
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream os;
      os << "csv parse error at row " << lineno << ": expected "
         << rows.front().size() << " columns, got " << row.size();
      throw std::runtime_error(os.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty dataset file: " + path);
  Dataset ds;
  ds.points.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < ds.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.points.cols(); ++j) {
      ds.points(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  ds.label = path;
  ds.validate();
  return ds;
}

inline void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d(); ++j) {
      if (j) out << ',';
      out << ds.points(i, j);
    }
    out << '\n';
  }
}

inline constexpr int kCubeMaxDim = 24;  // 2^24 points; memory guard

// All 2^d sign vertices with coordinates +-1/2.
inline Dataset generate_cube(int d) {
  require(d >= 2, "cube: d must be >= 2");
  if (d > kCubeMaxDim) {
    throw std::invalid_argument(
        "cube: d exceeds the enumeration cap of 24 (2^d points); "
        "use sample_cube_vertices for larger d");
  }
  const std::int64_t n = std::int64_t{1} << d;
  Dataset ds;
  ds.points.resize(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      ds.points(i, j) = ((i >> j) & 1) ? 0.5 : -0.5;
    }
  }
  ds.label = "cube(d=" + std::to_string(d) + ")";
  return ds;
}

// n vertices of the +-1/2 cube drawn uniformly with replacement.  Every
// vertex has |x|^2 = d/4 exactly, so sigma^2 = 1/4 and the length deviation
// constant is 0 for any sample; only the worst-direction constant varies.
inline Dataset sample_cube_vertices(int d, std::int64_t n, RngStream rng) {
  require(d >= 2 && d <= 64, "sample_cube_vertices: need 2 <= d <= 64");
  require(n >= 1, "sample_cube_vertices: n must be >= 1");
  Dataset ds;
  ds.points.resize(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t bits = rng.next_u64();
    for (int j = 0; j < d; ++j) {
      ds.points(i, j) = ((bits >> j) & 1) ? 0.5 : -0.5;
    }
  }
  ds.label = "cube-sample(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
  return ds;
}

inline Dataset generate(DatasetKind kind, int d, std::int64_t n, std::uint64_t seed) {
  require(d >= 2, "generate: d must be >= 2");
  RngStream rng(seed, 0x646174617365740ULL);
  Dataset ds;
  switch (kind) {
    case DatasetKind::kCube:
      return generate_cube(d);  // n ignored: all 2^d vertices
    case DatasetKind::kOrthobasis: {
      // n ignored: the d scaled basis vectors sqrt(d) e_i.
      ds.points = Eigen::MatrixXd::Zero(d, d);
      const double s = std::sqrt(static_cast<double>(d));
      for (int i = 0; i < d; ++i) ds.points(i, i) = s;
      ds.label = "orthobasis(d=" + std::to_string(d) + ")";
      return ds;
    }
    case DatasetKind::kGaussian: {
      require(n >= 1, "generate: n must be >= 1");
      ds.points.resize(n, d);
      for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) ds.points(i, j) = rng.normal();
      }
      ds.label = "gaussian(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
      return ds;
    }
    case DatasetKind::kLine: {
      // Collinear points t_i v on a random direction, t equally spaced and
      // rescaled so that sigma^2 = 1.
      require(n >= 1, "generate: n must be >= 1");
      Eigen::VectorXd v(d);
      double norm2 = 0.0;
      do {
        for (int j = 0; j < d; ++j) v[j] = rng.normal();
        norm2 = v.squaredNorm();
      } while (norm2 < 1e-200);
      v /= std::sqrt(norm2);
      Eigen::VectorXd t(n);
      if (n == 1) {
        t[0] = 1.0;
      } else {
        for (std::int64_t i = 0; i < n; ++i) {
          t[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        }
      }
      const double ms = t.squaredNorm() / static_cast<double>(n);
      t *= std::sqrt(static_cast<double>(d) / ms);
      ds.points = t * v.transpose();
      ds.label = "line(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
      return ds;
    }
    case DatasetKind::kClustered: {
      // Two unit-variance Gaussian clusters, means +-3 e_1.
      require(n >= 1, "generate: n must be >= 1");
      ds.points.resize(n, d);
      for (std::int64_t i = 0; i < n; ++i) {
        const double mean1 = (i % 2 == 0) ? 3.0 : -3.0;
        for (int j = 0; j < d; ++j) ds.points(i, j) = rng.normal();
        ds.points(i, 0) += mean1;
      }
      ds.label = "clustered(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
      return ds;
    }
  }
  throw std::invalid_argument("generate: unknown kind");
}

inline constexpr int kDenseEigenMaxDim = 64;

// sigma^2 = mean squared length / d; a_const = mean |sigma^-2 |x|^2 - d|;
// b_const = certified top eigenvalue of the second-moment matrix
// (1/n) sum x x^T.  Dense solve for small d, matrix-free power iteration
// with a Rayleigh certificate otherwise.
inline ConditionSummary compute_conditions(const Dataset& ds, double eig_tol = 1e-10) {
  ds.validate();
  require(eig_tol > 0.0 && eig_tol <= 1e-3, "compute_conditions: eig_tol in (0, 1e-3]");
  const Eigen::Index n = ds.n();
  const Eigen::Index d = ds.d();

  std::vector<double> len2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    len2[static_cast<std::size_t>(i)] = ds.points.row(i).squaredNorm();
  }
  const double total_len2 = pairwise_sum(len2);
  if (total_len2 <= 0.0) {
    throw std::invalid_argument("compute_conditions: degenerate scale, all points are zero");
  }
  ConditionSummary cs;
  cs.n = n;
  cs.d = d;
  cs.sigma2 = total_len2 / (static_cast<double>(n) * static_cast<double>(d));

  std::vector<double> dev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    dev[static_cast<std::size_t>(i)] =
        std::abs(len2[static_cast<std::size_t>(i)] / cs.sigma2 - static_cast<double>(d));
  }
  cs.a_const = pairwise_sum(dev) / static_cast<double>(n);

  // Top eigenpair of M = (1/n) X^T X.
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::VectorXd v;
  double lambda = 0.0;
  double residual = 0.0;
  auto apply_m = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return (ds.points.transpose() * (ds.points * x)) * inv_n;
  };
  if (d <= kDenseEigenMaxDim) {
    Eigen::MatrixXd m = (ds.points.transpose() * ds.points) * inv_n;
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("compute_conditions: dense eigensolver failed");
    }
    v = es.eigenvectors().col(d - 1);
    lambda = v.dot(m * v);
    residual = (m * v - lambda * v).norm();
  } else {
    RngStream rng(0x705572535549545FULL, static_cast<std::uint64_t>(n) * 1315423911ULL +
                                             static_cast<std::uint64_t>(d));
    v.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) v[j] = rng.normal();
    v.normalize();
    double prev = 0.0;
    const int max_iter = 100000;
    for (int it = 0; it < max_iter; ++it) {
      Eigen::VectorXd w = apply_m(v);
      lambda = v.dot(w);
      residual = (w - lambda * v).norm();
      const double wn = w.norm();
      if (wn < 1e-300) break;  // x in kernel direction; lambda ~ 0
      v = w / wn;
      const double rel_change = std::abs(lambda - prev) / std::max(std::abs(lambda), 1e-300);
      prev = lambda;
      if (rel_change < eig_tol * 1e-2 && residual <= eig_tol * std::max(lambda, 1e-300)) {
        break;
      }
    }
    Eigen::VectorXd w = apply_m(v);
    lambda = v.dot(w);
    residual = (w - lambda * v).norm();
  }

  double b = lambda + residual;
  // Exact lower bounds on the spectral value; raising the certificate to
  // them cannot push it below the truth.
  double max_len2 = 0.0;
  for (double l2 : len2) max_len2 = std::max(max_len2, l2);
  b = std::max(b, cs.sigma2);
  b = std::max(b, max_len2 * inv_n);
  cs.b_const = b;
  cs.b_residual = residual / std::max(lambda, 1e-300);
  if (cs.b_residual > eig_tol) {
    throw std::runtime_error("compute_conditions: eigen solve did not reach requested residual");
  }
  return cs;
}

}  // namespace pursuit
