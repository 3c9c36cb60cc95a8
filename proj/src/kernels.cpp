#include "gradsurf/kernels.hpp"

#include <cmath>

#ifdef GRADSURF_HAVE_OPENMP
#include <omp.h>
#endif

namespace gradsurf::kernels {

namespace {

// Per-column bodies shared by both variants so the arithmetic is identical.

inline bool divide_column(const Matrix& c, const Vector& left, double rj, double tol,
                          Matrix& out, Index j) {
  bool ok = true;
  for (Index i = 0; i < c.rows(); ++i) {
    const double d = left(i) + rj;
    if (d <= tol) {
      ok = false;
      out(i, j) = 0.0;
    } else {
      out(i, j) = c(i, j) / d;
    }
  }
  return ok;
}

inline void tikhonov_column(const Vector& alpha, const Vector& beta, const Matrix& p,
                            const Matrix& q, double lambda2x2, Matrix& m, Index j) {
  const double a = alpha(j);
  for (Index i = 0; i < p.rows(); ++i) {
    const double b = beta(i);
    const double den = a * a + b * b + lambda2x2;
    m(i, j) = den > 0.0 ? (b * p(i, j) + a * q(i, j)) / den : 0.0;
  }
}

inline void filter_column(const Vector& alpha, const Vector& beta, double lambda2x2, Matrix& f,
                          Index j) {
  const double a2 = alpha(j) * alpha(j);
  for (Index i = 0; i < beta.size(); ++i) {
    const double mu2 = a2 + beta(i) * beta(i);
    const double den = mu2 + lambda2x2;
    f(i, j) = den > 0.0 ? mu2 / den : 1.0;
  }
}

inline LCurvePoint lcurve_point(const Vector& alpha, const Vector& beta, const Matrix& p,
                                const Matrix& q, double lambda) {
  const double l2 = 2.0 * lambda * lambda;
  double rho2 = 0.0;
  double eta2 = 0.0;
  for (Index j = 0; j < p.cols(); ++j) {
    const double a = alpha(j);
    for (Index i = 0; i < p.rows(); ++i) {
      const double b = beta(i);
      const double den = a * a + b * b + l2;
      const double mij = den > 0.0 ? (b * p(i, j) + a * q(i, j)) / den : 0.0;
      const double rx = mij * a - q(i, j);
      const double ry = b * mij - p(i, j);
      rho2 += rx * rx + ry * ry;
      eta2 += mij * mij;
    }
  }
  return {lambda, std::sqrt(rho2), std::sqrt(eta2)};
}

inline double column_dot(const Matrix& a, const Vector& w, Index j) {
  double s = 0.0;
  for (Index i = 0; i < a.rows(); ++i) s += w(i) * a(i, j);
  return s;
}

inline double reflector_scale(const Vector& w) {
  double ww = 0.0;
  for (Index i = 0; i < w.size(); ++i) ww += w(i) * w(i);
  return 2.0 / ww;
}

inline double row_dot(const Matrix& a, const Vector& w, Index i) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j) s += a(i, j) * w(j);
  return s;
}

void check_lcurve_sizes(std::span<const double> lambdas, std::span<LCurvePoint> out) {
  if (lambdas.size() != out.size()) {
    throw Error(ErrorKind::dimension, "lcurve: output span size differs from lambda grid");
  }
}

}  // namespace

namespace serial {

bool diagonal_sylvester(const Matrix& c, const Vector& left, const Vector& right, double tol,
                        Matrix& out) {
  out.resize(c.rows(), c.cols());
  bool ok = true;
  for (Index j = 0; j < c.cols(); ++j) ok = divide_column(c, left, right(j), tol, out, j) && ok;
  return ok;
}

void tikhonov_coefficients(const Vector& alpha, const Vector& beta, const Matrix& p,
                           const Matrix& q, double lambda, Matrix& m) {
  m.resize(p.rows(), p.cols());
  const double l2 = 2.0 * lambda * lambda;
  for (Index j = 0; j < p.cols(); ++j) tikhonov_column(alpha, beta, p, q, l2, m, j);
}

void filter_factors(const Vector& alpha, const Vector& beta, double lambda, Matrix& f) {
  f.resize(beta.size(), alpha.size());
  const double l2 = 2.0 * lambda * lambda;
  for (Index j = 0; j < alpha.size(); ++j) filter_column(alpha, beta, l2, f, j);
}

void lcurve(const Vector& alpha, const Vector& beta, const Matrix& p, const Matrix& q,
            std::span<const double> lambdas, std::span<LCurvePoint> out) {
  check_lcurve_sizes(lambdas, out);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    out[k] = lcurve_point(alpha, beta, p, q, lambdas[k]);
  }
}

void reflect_left(Matrix& a, const Vector& w) {
  const double s = reflector_scale(w);
  for (Index j = 0; j < a.cols(); ++j) {
    const double t = s * column_dot(a, w, j);
    for (Index i = 0; i < a.rows(); ++i) a(i, j) -= t * w(i);
  }
}

void reflect_right(Matrix& a, const Vector& w) {
  const double s = reflector_scale(w);
  Vector t(a.rows());
  for (Index i = 0; i < a.rows(); ++i) t(i) = s * row_dot(a, w, i);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) a(i, j) -= t(i) * w(j);
  }
}

}  // namespace serial

namespace omp {

bool diagonal_sylvester(const Matrix& c, const Vector& left, const Vector& right, double tol,
                        Matrix& out) {
  out.resize(c.rows(), c.cols());
  int bad = 0;
  const Index cols = c.cols();
#pragma omp parallel for reduction(| : bad) schedule(static)
  for (Index j = 0; j < cols; ++j) {
    if (!divide_column(c, left, right(j), tol, out, j)) bad |= 1;
  }
  return bad == 0;
}

void tikhonov_coefficients(const Vector& alpha, const Vector& beta, const Matrix& p,
                           const Matrix& q, double lambda, Matrix& m) {
  m.resize(p.rows(), p.cols());
  const double l2 = 2.0 * lambda * lambda;
  const Index cols = p.cols();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j) tikhonov_column(alpha, beta, p, q, l2, m, j);
}

void filter_factors(const Vector& alpha, const Vector& beta, double lambda, Matrix& f) {
  f.resize(beta.size(), alpha.size());
  const double l2 = 2.0 * lambda * lambda;
  const Index cols = alpha.size();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j) filter_column(alpha, beta, l2, f, j);
}

void lcurve(const Vector& alpha, const Vector& beta, const Matrix& p, const Matrix& q,
            std::span<const double> lambdas, std::span<LCurvePoint> out) {
  check_lcurve_sizes(lambdas, out);
  const auto count = static_cast<std::ptrdiff_t>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    out[uk] = lcurve_point(alpha, beta, p, q, lambdas[uk]);
  }
}

void reflect_left(Matrix& a, const Vector& w) {
  const double s = reflector_scale(w);
  const Index cols = a.cols();
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j) {
    const double t = s * column_dot(a, w, j);
    for (Index i = 0; i < a.rows(); ++i) a(i, j) -= t * w(i);
  }
}

void reflect_right(Matrix& a, const Vector& w) {
  const double s = reflector_scale(w);
  const Index rows = a.rows();
  const Index cols = a.cols();
  Vector t(rows);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) t(i) = s * row_dot(a, w, i);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) a(i, j) -= t(i) * w(j);
  }
}

}  // namespace omp

int max_threads() {
#ifdef GRADSURF_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace gradsurf::kernels
