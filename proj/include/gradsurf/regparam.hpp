#pragma once

#include "gradsurf/diffops.hpp"
#include "gradsurf/kernels.hpp"
#include "gradsurf/types.hpp"

#include <span>
#include <vector>

namespace gradsurf {

/// Standard-form Tikhonov problem diagonalized by the SVDs
/// Dx = Ux Sx Vx^T and Dy = Uy Sy Vy^T. With the gradient projected once
/// (P = Uy^T Zy Vx, Q = Vy^T Zx Ux), every lambda costs O(mn).
///
/// alpha and beta are sorted descending; the last entry of each is the
/// differentiation null space and is stored as exactly zero.
struct SpectralCache {
  Vector alpha;  // singular values of Dx (n)
  Vector beta;   // singular values of Dy (m)
  Matrix vx;     // n x n
  Matrix vy;     // m x m
  Matrix p;      // m x n
  Matrix q;      // m x n

  Index rows() const { return beta.size(); }
  Index cols() const { return alpha.size(); }
};

SpectralCache build_cache(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy);

/// Coefficients M(lambda) of the surface in the (Vy, Vx) frame.
Matrix tikhonov_coefficients(const SpectralCache& cache, double lambda);

/// mu_ij^2 / (mu_ij^2 + 2 lambda^2) with mu_ij^2 = alpha_j^2 + beta_i^2.
Matrix filter_factors(const SpectralCache& cache, double lambda);

/// Z(lambda) = Vy M(lambda) Vx^T.
Surface reconstruct_from_cache(const SpectralCache& cache, double lambda, double hx = 1.0,
                               double hy = 1.0);

using LCurvePoint = kernels::LCurvePoint;

/// (lambda, rho, eta) for each grid value; rho^2 is the gradient residual and
/// eta^2 = ||Z(lambda)||_F^2.
std::vector<LCurvePoint> l_curve(const SpectralCache& cache, std::span<const double> lambdas);

/// `count` logarithmically spaced values over [1e-4, 1e1] * median(mu_ij).
std::vector<double> default_lambda_grid(const SpectralCache& cache, std::size_t count = 20);

/// Grid lambda at the point of maximum signed three-point curvature of
/// (log rho, log eta), turning the way an L-curve corner turns. Ties go to
/// the smaller lambda; a curve with no positive curvature (e.g. a straight
/// line in log-log) returns the smallest lambda.
double corner(std::span<const LCurvePoint> points);

/// Index version of corner().
std::size_t corner_index(std::span<const LCurvePoint> points);

}  // namespace gradsurf
