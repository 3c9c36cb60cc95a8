#pragma once

#include "gradsurf/types.hpp"

namespace gradsurf {

/// Dense finite-difference differentiation operator on uniformly spaced
/// nodes. Interior rows carry the centered stencil; the rows next to the
/// ends carry one-sided/offset stencils of the same accuracy order, so the
/// operator is consistent everywhere and D*1 = 0 with a one-dimensional
/// null space.
class DiffMatrix {
 public:
  DiffMatrix(Index n, double h, int order);

  Index size() const { return entries_.rows(); }
  double spacing() const { return h_; }
  int order() const { return order_; }
  const Matrix& matrix() const { return entries_; }

  /// Derivative of sampled values: D * f.
  Vector apply(const Vector& f) const { return entries_ * f; }

  /// D * X and X * D^T using the stencil band only (order+1 entries per
  /// row), O(order * size * other) instead of a dense product.
  Matrix times(const Matrix& x) const;
  Matrix times_transpose(const Matrix& x) const;

 private:
  Index band_start(Index row) const;

  Matrix entries_;
  double h_;
  int order_;
};

DiffMatrix diff_matrix(Index n, double h, int order);

/// Builds the operator from explicit node positions. Only uniform spacing is
/// supported; non-uniform nodes are rejected.
DiffMatrix diff_matrix_from_nodes(const Vector& nodes, int order);

/// x-derivative of a grid: Z * Dx^T.
Matrix apply_dx(const Matrix& z, const DiffMatrix& dx);

/// y-derivative of a grid: Dy * Z.
Matrix apply_dy(const Matrix& z, const DiffMatrix& dy);

/// Sum of squared gradient residuals
///   ||Z Dx^T - Zx||_F^2 + ||Dy Z - Zy||_F^2,
/// the global least-squares cost every method is measured against.
double gradient_cost(const Matrix& z, const GradientField& g,
                     const DiffMatrix& dx, const DiffMatrix& dy);

}  // namespace gradsurf
