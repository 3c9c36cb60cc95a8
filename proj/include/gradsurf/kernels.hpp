#pragma once

#include "gradsurf/types.hpp"

#include <span>

namespace gradsurf::kernels {

struct LCurvePoint {
  double lambda = 0.0;
  double rho = 0.0;  // gradient residual norm
  double eta = 0.0;  // solution norm
};

// Each kernel exists twice with identical per-element arithmetic: `serial`
// is the reference, `omp` splits the outer loop across threads. Results are
// bit-identical between the two; the tests hold them to that.

namespace serial {

/// out(i,j) = c(i,j) / (left(i) + right(j)). Returns false (leaving `out`
/// unspecified) if any denominator is <= tol.
bool diagonal_sylvester(const Matrix& c, const Vector& left, const Vector& right, double tol,
                        Matrix& out);

/// m(i,j) = (beta_i p_ij + alpha_j q_ij) / (alpha_j^2 + beta_i^2 + 2 lambda^2);
/// a vanishing denominator (only at lambda = 0 on the doubly-null pair) gives 0.
void tikhonov_coefficients(const Vector& alpha, const Vector& beta, const Matrix& p,
                           const Matrix& q, double lambda, Matrix& m);

/// f(i,j) = mu2 / (mu2 + 2 lambda^2) with mu2 = alpha_j^2 + beta_i^2; 1 where mu2 = 0.
void filter_factors(const Vector& alpha, const Vector& beta, double lambda, Matrix& f);

/// One (rho, eta) pair per lambda, evaluated in the singular-vector frame.
void lcurve(const Vector& alpha, const Vector& beta, const Matrix& p, const Matrix& q,
            std::span<const double> lambdas, std::span<LCurvePoint> out);

/// a <- (I - 2 w w^T / w^T w) a
void reflect_left(Matrix& a, const Vector& w);

/// a <- a (I - 2 w w^T / w^T w)
void reflect_right(Matrix& a, const Vector& w);

}  // namespace serial

namespace omp {

bool diagonal_sylvester(const Matrix& c, const Vector& left, const Vector& right, double tol,
                        Matrix& out);
void tikhonov_coefficients(const Vector& alpha, const Vector& beta, const Matrix& p,
                           const Matrix& q, double lambda, Matrix& m);
void filter_factors(const Vector& alpha, const Vector& beta, double lambda, Matrix& f);
void lcurve(const Vector& alpha, const Vector& beta, const Matrix& p, const Matrix& q,
            std::span<const double> lambdas, std::span<LCurvePoint> out);
void reflect_left(Matrix& a, const Vector& w);
void reflect_right(Matrix& a, const Vector& w);

}  // namespace omp

/// Kernels the library calls: the OpenMP ones when built with OpenMP.
#ifdef GRADSURF_HAVE_OPENMP
namespace active = omp;
#else
namespace active = serial;
#endif

/// Number of threads the omp kernels will use (1 without OpenMP).
int max_threads();

}  // namespace gradsurf::kernels
