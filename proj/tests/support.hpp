#pragma once

// Shared helpers for the unit tests: seeded generators and independent
// dense oracles built with Eigen.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mrecon/image.hpp"
#include "mrecon/linear_operator.hpp"

namespace testing {

using mrecon::Vector;

inline Vector gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Relative adjoint mismatch |⟨Au, v⟩ − ⟨u, Aᵀv⟩| / (‖Au‖‖v‖).
inline double adjoint_gap(const mrecon::LinearOperator& op, std::mt19937_64& rng) {
  const Vector u = gaussian(op.cols(), rng);
  const Vector v = gaussian(op.rows(), rng);
  const Vector au = op.apply(u);
  const Vector atv = op.apply_adjoint(v);
  const double scale = std::max(norm(au) * norm(v), norm(u) * norm(atv));
  return std::abs(dot(au, v) - dot(u, atv)) / (scale > 0.0 ? scale : 1.0);
}

/// Dense column-by-column materialization written against Eigen.
inline Eigen::MatrixXd dense_of(const mrecon::LinearOperator& op) {
  Eigen::MatrixXd m(op.rows(), op.cols());
  Vector e(op.cols(), 0.0);
  for (std::size_t j = 0; j < op.cols(); ++j) {
    e[j] = 1.0;
    const Vector col = op.apply(e);
    for (std::size_t i = 0; i < op.rows(); ++i) m(i, j) = col[i];
    e[j] = 0.0;
  }
  return m;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

inline mrecon::DenseOperator to_operator(const Eigen::MatrixXd& m) {
  Vector e(static_cast<std::size_t>(m.rows() * m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e[static_cast<std::size_t>(i) * m.cols() + j] = m(i, j);
  return mrecon::DenseOperator(m.rows(), m.cols(), std::move(e));
}

inline double largest_singular_value(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

/// One-level periodic two-channel analysis matrix of size m: lowpass rows
/// first, highpass second, built from the filter definition.
inline Eigen::MatrixXd analysis_matrix(int m, std::span<const double> h) {
  const int taps = static_cast<int>(h.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m / 2; ++k) {
    for (int j = 0; j < taps; ++j) {
      const int col = (2 * k + j) % m;
      a(k, col) += h[j];
      a(m / 2 + k, col) += ((j % 2 == 0) ? 1.0 : -1.0) * h[taps - 1 - j];
    }
  }
  return a;
}

/// Dense Ψᵀ for the 2-D Mallat transform on an n×n row-major grid: each
/// level is a Kronecker product acting on the current top-left block.
template <class LevelMatrix>
Eigen::MatrixXd dense_analysis_2d(int n, int levels, LevelMatrix level_matrix) {
  const int p = n * n;
  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(p, p);
  for (int level = 0, m = n; level < levels; ++level, m /= 2) {
    const Eigen::MatrixXd a = level_matrix(m);
    Eigen::MatrixXd step = Eigen::MatrixXd::Identity(p, p);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        const int row = r * n + c;
        step(row, row) = 0.0;
        for (int r2 = 0; r2 < m; ++r2)
          for (int c2 = 0; c2 < m; ++c2) step(row, r2 * n + c2) = a(r, r2) * a(c, c2);
      }
    total = step * total;
  }
  return total;
}

/// Closed-form Haar analysis matrix of size m (independent of any filter
/// table): row k averages samples 2k, 2k+1; row m/2+k differences them.
inline Eigen::MatrixXd haar_matrix(int m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  const double s = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < m / 2; ++k) {
    a(k, 2 * k) = s;
    a(k, 2 * k + 1) = s;
    a(m / 2 + k, 2 * k) = s;
    a(m / 2 + k, 2 * k + 1) = -s;
  }
  return a;
}

}  // namespace testing
