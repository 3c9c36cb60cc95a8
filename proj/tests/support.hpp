#pragma once

// Test-side oracles. Everything here is written against the math directly
// and shares no code with the library beyond the Matrix type and the
// operators under test.

#include "gradsurf/diffops.hpp"
#include "gradsurf/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace testing_support {

using gradsurf::GradientField;
using gradsurf::Index;
using gradsurf::Matrix;
using gradsurf::Vector;

inline Matrix random_matrix(Index m, Index n, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Matrix a(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) a(i, j) = nd(gen);
  return a;
}

inline GradientField random_gradient(Index m, Index n, std::mt19937_64& gen, double hx = 1.0,
                                     double hy = 1.0) {
  return {random_matrix(m, n, gen), random_matrix(m, n, gen), hx, hy};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

/// Minimum-norm solution of the stacked vectorized system
/// [Dx (x) I; I (x) Dy] vec Z = [vec Zx; vec Zy] through an SVD pseudo-inverse.
inline Matrix kron_min_norm(const GradientField& g, const Matrix& dx, const Matrix& dy) {
  const Index m = g.zx.rows();
  const Index n = g.zx.cols();
  Matrix k(2 * m * n, m * n);
  k.topRows(m * n) = kron(dx, Matrix::Identity(m, m));
  k.bottomRows(m * n) = kron(Matrix::Identity(n, n), dy);
  Vector rhs(2 * m * n);
  rhs << g.zx.reshaped(), g.zy.reshaped();
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cut = 1e-10 * s(0);
  Vector c = svd.matrixU().transpose() * rhs;
  for (Index i = 0; i < s.size(); ++i) c(i) = s(i) > cut ? c(i) / s(i) : 0.0;
  const Vector z = svd.matrixV() * c;
  return z.reshaped(m, n);
}

inline Matrix centered(const Matrix& z) { return z.array() - z.mean(); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double aligned_diff(const Matrix& a, const Matrix& b) {
  return max_abs_diff(centered(a), centered(b));
}

/// ||A - B||_F / ||B||_F after removing both means.
inline double aligned_rel(const Matrix& a, const Matrix& b) {
  const Matrix cb = centered(b);
  return (centered(a) - cb).norm() / cb.norm();
}

/// ||Z Dx^T - Zx||^2 + ||Dy Z - Zy||^2 with plain dense products.
inline double ls_cost(const Matrix& z, const GradientField& g, const Matrix& dx, const Matrix& dy) {
  return (z * dx.transpose() - g.zx).squaredNorm() + (dy * z - g.zy).squaredNorm();
}

/// Symmetric inverse square root through an eigendecomposition.
inline Matrix inv_sqrt(const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

inline Matrix random_spd(Index n, std::mt19937_64& gen) {
  const Matrix a = random_matrix(n, n, gen);
  return a * a.transpose() / static_cast<double>(n) + Matrix::Identity(n, n);
}

/// Largest |d/de J(x + e v)| over `count` random unit directions v, scaled
/// by |x| so the value is comparable to J. Central differences are exact for
/// quadratics up to rounding.
inline double max_directional_slope(const std::function<double(const Matrix&)>& cost,
                                    const Matrix& x, int count, std::mt19937_64& gen) {
  const double len = std::max(1.0, x.norm());
  const double eps = 1e-3 * len;
  double worst = 0.0;
  for (int k = 0; k < count; ++k) {
    Matrix v = random_matrix(x.rows(), x.cols(), gen);
    v /= v.norm();
    const double d = (cost(x + eps * v) - cost(x - eps * v)) / (2.0 * eps);
    worst = std::max(worst, std::abs(d) * len);
  }
  return worst;
}

/// Polynomial sum c_ab x^a y^b over a + b <= degree with its partials.
struct Polynomial {
  int degree = 0;
  Matrix coeff;  // coeff(a, b)

  double value(double x, double y) const {
    double s = 0.0;
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) s += coeff(a, b) * std::pow(x, a) * std::pow(y, b);
    return s;
  }
  double dx(double x, double y) const {
    double s = 0.0;
    for (int a = 1; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b)
        s += coeff(a, b) * a * std::pow(x, a - 1) * std::pow(y, b);
    return s;
  }
  double dy(double x, double y) const {
    double s = 0.0;
    for (int a = 0; a <= degree; ++a)
      for (int b = 1; a + b <= degree; ++b)
        s += coeff(a, b) * b * std::pow(x, a) * std::pow(y, b - 1);
    return s;
  }
};

inline Polynomial random_polynomial(int degree, std::mt19937_64& gen) {
  Polynomial p;
  p.degree = degree;
  p.coeff = random_matrix(degree + 1, degree + 1, gen);
  return p;
}

struct Sampled {
  Matrix z;
  GradientField g;
};

/// Samples on x_j = x0 + j hx (columns), y_i = y0 + i hy (rows).
template <class F>
Sampled sample(const F& f, Index m, Index n, double x0, double hx, double y0, double hy) {
  Sampled s{Matrix(m, n), GradientField{Matrix(m, n), Matrix(m, n), hx, hy}};
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      const double x = x0 + static_cast<double>(j) * hx;
      const double y = y0 + static_cast<double>(i) * hy;
      s.z(i, j) = f.value(x, y);
      s.g.zx(i, j) = f.dx(x, y);
      s.g.zy(i, j) = f.dy(x, y);
    }
  }
  return s;
}

}  // namespace testing_support
