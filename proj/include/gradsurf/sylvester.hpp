#pragma once

#include "gradsurf/types.hpp"

namespace gradsurf {

/// Normal equations of every reconstruction method,
///
///   A^T A Phi + Phi B^T B - A^T F - G B = 0,
///
/// with A (r x m), B (s x n), F (r x n), G (m x s) and Phi (m x n).
/// u and v are the null vectors of A and B when the operator is rank-one
/// deficient; both empty otherwise.
struct SylvesterSystem {
  Matrix a;
  Matrix b;
  Matrix f;
  Matrix g;
  Vector u;
  Vector v;

  Index rows() const { return a.cols(); }
  Index cols() const { return b.cols(); }
  bool has_null_space() const { return u.size() > 0; }

  /// Throws Error(dimension) on inconsistent block sizes and
  /// Error(invalid_argument) if u/v are not null vectors of A/B.
  void validate() const;

  /// A^T A, B^T B and the right-hand side A^T F + G B.
  Matrix left_coefficient() const;
  Matrix right_coefficient() const;
  Matrix rhs() const;
};

/// ||A Phi - F||_F^2 + ||Phi B^T - G||_F^2, whose gradient in Phi is twice
/// the Sylvester residual.
double sylvester_cost(const SylvesterSystem& sys, const Matrix& phi);

/// A^T A Phi + Phi B^T B - (A^T F + G B).
Matrix sylvester_residual(const SylvesterSystem& sys, const Matrix& phi);

/// Solves P X + X Q = C for symmetric positive semi-definite P, Q whose
/// spectra never sum to (numerically) zero. Both coefficient matrices are
/// diagonalized by a symmetric eigendecomposition and the transformed
/// equation is solved entrywise.
Matrix solve_full_rank(const Matrix& p, const Matrix& q, const Matrix& c);

/// Implicit Householder reflector I - 2 w w^T / w^T w mapping the vector it
/// was built from onto a multiple of e1. Never materialized by the solver.
class Reflector {
 public:
  explicit Reflector(Vector w) : w_(std::move(w)) {}

  const Vector& vector() const { return w_; }
  Index size() const { return w_.size(); }

  void apply_left(Matrix& a) const;   // a <- P a
  void apply_right(Matrix& a) const;  // a <- a P
  Vector apply(const Vector& x) const;

  /// Dense P, for tests and small diagnostics only.
  Matrix materialize() const;

 private:
  Vector w_;
};

/// Reflector with w = u + sign(u_0) ||u|| e1, so P u = -sign(u_0) ||u|| e1.
Reflector householder_vector(const Vector& u);

/// Rank-one-deficient solve: reflect the known null direction u v^T onto
/// e1 e1^T, solve the first row and column as two small least-squares
/// problems (QR, no normal equations) and the trailing block as a full-rank
/// Sylvester equation, set the free corner to zero and reflect back. The
/// result satisfies u^T Phi v = 0.
Matrix solve_deflated(const SylvesterSystem& sys);

/// Dispatches to solve_deflated when the system carries null vectors and to
/// solve_full_rank otherwise.
Matrix solve(const SylvesterSystem& sys);

struct SymmetricRoots {
  Matrix root;
  Matrix inverse_root;
};

/// Symmetric square root of a symmetric positive definite matrix and its
/// inverse.
SymmetricRoots sym_sqrt(const Matrix& m);

enum class WorkModel { hessenberg_schur, vectorized, spectral };

/// Flop counts: (5/3)m^3 + 10n^3 + 5m^2 n + (5/2)m n^2 for a Sylvester solve,
/// 41 m^3 n^3 for the dense vectorized least-squares problem, and the
/// Sylvester count at (m/2^k, n/2^k) for spectral truncation level k.
double work_estimate(Index m, Index n, WorkModel model, int truncation_level = 0);

/// Symmetric A^T A computed as a rank update (exactly symmetric).
Matrix gram(const Matrix& a);

}  // namespace gradsurf
