#include "gradsurf/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

namespace gradsurf {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // rejection keeps the draw unbiased
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic_normal(std::vector<double> samples) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = normal_cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) return 1.0;
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // small-lambda form of the Kolmogorov CDF converges faster here
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double s = 0.0;
    for (int j = 1; j < 60; j += 2) s += std::pow(y, j * j);
    const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * s;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

GradientLeverage gls_leverage(const DiffMatrix& dx, const DiffMatrix& dy) {
  const Matrix& ddx = dx.matrix();
  const Matrix& ddy = dy.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> ex(ddx.transpose() * ddx);
  Eigen::SelfAdjointEigenSolver<Matrix> ey(ddy.transpose() * ddy);
  const Vector& a = ex.eigenvalues();  // ascending; a(0) is the null direction
  const Vector& b = ey.eigenvalues();
  const Matrix& wx = ex.eigenvectors();
  const Matrix& wy = ey.eigenvectors();
  const Index m = b.size();
  const Index n = a.size();

  Matrix inv(m, n);
  for (Index l = 0; l < n; ++l) {
    for (Index k = 0; k < m; ++k) inv(k, l) = 1.0 / (b(k) + a(l));
  }
  inv(0, 0) = 0.0;  // pseudo-inverse drops the constant surface

  const Matrix dxw = ddx * wx;
  const Matrix dyw = ddy * wy;
  GradientLeverage lev;
  lev.x = wy.cwiseAbs2() * inv * dxw.cwiseAbs2().transpose();
  lev.y = dyw.cwiseAbs2() * inv * wx.cwiseAbs2().transpose();
  return lev;
}

std::vector<double> studentized_residuals(const Matrix& rx, const Matrix& ry,
                                          const GradientLeverage& lev) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rx.size() + ry.size()));
  auto add = [&out](const Matrix& r, const Matrix& h) {
    double ss = 0.0;
    double dof = 0.0;
    for (Index k = 0; k < r.size(); ++k) {
      const double w = 1.0 - h(k);
      if (w <= 1e-12) continue;
      ss += r(k) * r(k);
      dof += w;
    }
    if (!(ss > 0.0) || !(dof > 0.0)) return;
    const double sigma = std::sqrt(ss / dof);
    for (Index k = 0; k < r.size(); ++k) {
      const double w = 1.0 - h(k);
      if (w <= 1e-12) continue;
      out.push_back(r(k) / (sigma * std::sqrt(w)));
    }
  };
  add(rx, lev.x);
  add(ry, lev.y);
  return out;
}

}  // namespace gradsurf
