#include "gradsurf/diffops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace gradsurf {

namespace {

// Five-point stencils (times 1/12h). Rows 0,1 and n-2,n-1 use the offset
// forms anchored at the grid ends; everything else the centered one.
constexpr std::array<std::array<double, 5>, 5> kFivePoint = {{
    {-25.0, 48.0, -36.0, 16.0, -3.0},
    {-3.0, -10.0, 18.0, -6.0, 1.0},
    {1.0, -8.0, 0.0, 8.0, -1.0},
    {-1.0, 6.0, -18.0, 10.0, 3.0},
    {3.0, -16.0, 36.0, -48.0, 25.0},
}};

constexpr std::array<std::array<double, 3>, 3> kThreePoint = {{
    {-3.0, 4.0, -1.0},
    {-1.0, 0.0, 1.0},
    {1.0, -4.0, 3.0},
}};

Matrix build_order2(Index n, double h) {
  Matrix d = Matrix::Zero(n, n);
  const double s = 1.0 / (2.0 * h);
  for (int k = 0; k < 3; ++k) {
    d(0, k) = s * kThreePoint[0][k];
    d(n - 1, n - 3 + k) = s * kThreePoint[2][k];
  }
  for (Index i = 1; i + 1 < n; ++i) {
    for (int k = 0; k < 3; ++k) d(i, i - 1 + k) = s * kThreePoint[1][k];
  }
  return d;
}

Matrix build_order4(Index n, double h) {
  Matrix d = Matrix::Zero(n, n);
  const double s = 1.0 / (12.0 * h);
  for (int k = 0; k < 5; ++k) {
    d(0, k) = s * kFivePoint[0][k];
    d(1, k) = s * kFivePoint[1][k];
    d(n - 2, n - 5 + k) = s * kFivePoint[3][k];
    d(n - 1, n - 5 + k) = s * kFivePoint[4][k];
  }
  for (Index i = 2; i + 2 < n; ++i) {
    for (int k = 0; k < 5; ++k) d(i, i - 2 + k) = s * kFivePoint[2][k];
  }
  return d;
}

}  // namespace

DiffMatrix::DiffMatrix(Index n, double h, int order) : h_(h), order_(order) {
  if (order != 2 && order != 4) {
    throw Error(ErrorKind::invalid_argument,
                "differentiation order must be 2 or 4, got " + std::to_string(order));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::invalid_argument, "node spacing must be positive");
  }
  if (n < order + 1) {
    throw Error(ErrorKind::invalid_argument,
                "order-" + std::to_string(order) + " operator needs at least " +
                    std::to_string(order + 1) + " nodes, got " + std::to_string(n));
  }
  entries_ = order == 2 ? build_order2(n, h) : build_order4(n, h);
}

// Every row's nonzeros sit in order+1 consecutive columns.
Index DiffMatrix::band_start(Index row) const {
  const Index w = order_ + 1;
  return std::clamp<Index>(row - order_ / 2, 0, size() - w);
}

Matrix DiffMatrix::times(const Matrix& x) const {
  if (x.rows() != size()) throw Error(ErrorKind::dimension, "D * X: row count mismatch");
  const Index w = order_ + 1;
  Matrix out(size(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < size(); ++i) {
      const Index s = band_start(i);
      double acc = 0.0;
      for (Index k = 0; k < w; ++k) acc += entries_(i, s + k) * x(s + k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix DiffMatrix::times_transpose(const Matrix& x) const {
  if (x.cols() != size()) throw Error(ErrorKind::dimension, "X * D^T: column count mismatch");
  const Index w = order_ + 1;
  Matrix out = Matrix::Zero(x.rows(), size());
  for (Index i = 0; i < size(); ++i) {
    const Index s = band_start(i);
    for (Index k = 0; k < w; ++k) {
      const double d = entries_(i, s + k);
      if (d != 0.0) out.col(i) += d * x.col(s + k);
    }
  }
  return out;
}

DiffMatrix diff_matrix(Index n, double h, int order) { return DiffMatrix(n, h, order); }

DiffMatrix diff_matrix_from_nodes(const Vector& nodes, int order) {
  const Index n = nodes.size();
  if (n < 2) throw Error(ErrorKind::invalid_argument, "need at least two nodes");
  const double h = (nodes(n - 1) - nodes(0)) / static_cast<double>(n - 1);
  for (Index i = 1; i < n; ++i) {
    const double step = nodes(i) - nodes(i - 1);
    if (std::abs(step - h) > 1e-9 * std::abs(h)) {
      throw Error(ErrorKind::invalid_argument, "non-uniform node spacing is not supported");
    }
  }
  return DiffMatrix(n, h, order);
}

Matrix apply_dx(const Matrix& z, const DiffMatrix& dx) {
  if (dx.size() != z.cols()) {
    throw Error(ErrorKind::dimension, "apply_dx: operator size " + std::to_string(dx.size()) +
                                          " does not match grid columns " +
                                          std::to_string(z.cols()));
  }
  return dx.times_transpose(z);
}

Matrix apply_dy(const Matrix& z, const DiffMatrix& dy) {
  if (dy.size() != z.rows()) {
    throw Error(ErrorKind::dimension, "apply_dy: operator size " + std::to_string(dy.size()) +
                                          " does not match grid rows " +
                                          std::to_string(z.rows()));
  }
  return dy.times(z);
}

double gradient_cost(const Matrix& z, const GradientField& g, const DiffMatrix& dx,
                     const DiffMatrix& dy) {
  if (g.zx.rows() != z.rows() || g.zx.cols() != z.cols()) {
    throw Error(ErrorKind::dimension, "gradient_cost: surface and gradient sizes differ");
  }
  return (apply_dx(z, dx) - g.zx).squaredNorm() + (apply_dy(z, dy) - g.zy).squaredNorm();
}

}  // namespace gradsurf
