#include "gradsurf/regparam.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace gradsurf {

namespace {

constexpr double kNullSingularTolerance = 1e-10;
constexpr double kCurvatureFloor = 1e-6;

struct OperatorSvd {
  Vector sigma;
  Matrix u;
  Matrix v;
};

OperatorSvd decompose(const DiffMatrix& d, const char* name) {
  Eigen::BDCSVD<Matrix> svd(d.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  OperatorSvd out{svd.singularValues(), svd.matrixU(), svd.matrixV()};
  const Index n = out.sigma.size();
  const double cutoff = kNullSingularTolerance * out.sigma(0);
  const auto zeros = (out.sigma.array() <= cutoff).count();
  if (zeros != 1) {
    throw Error(ErrorKind::singular, std::string(name) + " has " + std::to_string(zeros) +
                                         " numerically zero singular values, expected 1");
  }
  out.sigma(n - 1) = 0.0;
  return out;
}

double safe_log(double x) { return std::log(std::max(x, 1e-300)); }

}  // namespace

SpectralCache build_cache(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy) {
  validate(g);
  if (dx.size() != g.cols() || dy.size() != g.rows()) {
    throw Error(ErrorKind::dimension, "operator sizes do not match the gradient grid");
  }
  const OperatorSvd sx = decompose(dx, "Dx");
  const OperatorSvd sy = decompose(dy, "Dy");
  SpectralCache c;
  c.alpha = sx.sigma;
  c.beta = sy.sigma;
  c.vx = sx.v;
  c.vy = sy.v;
  c.p = sy.u.transpose() * g.zy * sx.v;
  c.q = sy.v.transpose() * g.zx * sx.u;
  return c;
}

Matrix tikhonov_coefficients(const SpectralCache& cache, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be >= 0");
  Matrix m;
  kernels::active::tikhonov_coefficients(cache.alpha, cache.beta, cache.p, cache.q, lambda, m);
  return m;
}

Matrix filter_factors(const SpectralCache& cache, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, "lambda must be >= 0");
  Matrix f;
  kernels::active::filter_factors(cache.alpha, cache.beta, lambda, f);
  return f;
}

Surface reconstruct_from_cache(const SpectralCache& cache, double lambda, double hx,
                               double hy) {
  const Matrix m = tikhonov_coefficients(cache, lambda);
  return Surface{cache.vy * m * cache.vx.transpose(), hx, hy};
}

std::vector<LCurvePoint> l_curve(const SpectralCache& cache, std::span<const double> lambdas) {
  if (lambdas.empty()) throw Error(ErrorKind::invalid_argument, "empty lambda grid");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0)) {
      throw Error(ErrorKind::invalid_argument, "lambda grid values must be positive");
    }
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw Error(ErrorKind::invalid_argument, "lambda grid must be strictly ascending");
    }
  }
  std::vector<LCurvePoint> out(lambdas.size());
  kernels::active::lcurve(cache.alpha, cache.beta, cache.p, cache.q, lambdas, out);
  return out;
}

std::vector<double> default_lambda_grid(const SpectralCache& cache, std::size_t count) {
  if (count < 2) throw Error(ErrorKind::invalid_argument, "lambda grid needs at least 2 points");
  std::vector<double> mu;
  mu.reserve(static_cast<std::size_t>(cache.rows() * cache.cols()));
  for (Index j = 0; j < cache.cols(); ++j) {
    for (Index i = 0; i < cache.rows(); ++i) {
      mu.push_back(std::hypot(cache.alpha(j), cache.beta(i)));
    }
  }
  auto mid = mu.begin() + static_cast<std::ptrdiff_t>(mu.size() / 2);
  std::nth_element(mu.begin(), mid, mu.end());
  const double median = *mid;
  const double lo = std::log10(1e-4 * median);
  const double hi = std::log10(1e1 * median);
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    grid[k] = std::pow(10.0, lo + t * (hi - lo));
  }
  return grid;
}

std::size_t corner_index(std::span<const LCurvePoint> points) {
  if (points.size() < 5) {
    throw Error(ErrorKind::invalid_argument, "corner detection needs at least 5 L-curve points");
  }
  std::size_t best = 0;
  double best_kappa = kCurvatureFloor;
  for (std::size_t k = 1; k + 1 < points.size(); ++k) {
    const double ax = safe_log(points[k - 1].rho), ay = safe_log(points[k - 1].eta);
    const double bx = safe_log(points[k].rho), by = safe_log(points[k].eta);
    const double cx = safe_log(points[k + 1].rho), cy = safe_log(points[k + 1].eta);
    const double cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx);
    const double denom = std::hypot(bx - ax, by - ay) * std::hypot(cx - bx, cy - by) *
                         std::hypot(cx - ax, cy - ay);
    if (!(denom > 0.0)) continue;
    const double kappa = 2.0 * cross / denom;
    if (kappa > best_kappa) {
      best_kappa = kappa;
      best = k;
    }
  }
  return best;
}

double corner(std::span<const LCurvePoint> points) { return points[corner_index(points)].lambda; }

}  // namespace gradsurf
