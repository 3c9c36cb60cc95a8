#include "gradsurf/simulate.hpp"

#include "gradsurf/regparam.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>

#ifdef GRADSURF_HAVE_OPENMP
#include <omp.h>
#endif

namespace gradsurf {

// ---------------------------------------------------------------------------
// test surface

void BumpSurfaceSpec::validate() const {
  if (rows < 2 || cols < 2) throw Error(ErrorKind::invalid_argument, "grid needs at least 2x2 nodes");
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
      !std::isfinite(y_min) || !std::isfinite(y_max)) {
    throw Error(ErrorKind::invalid_argument, "domain extents must be finite and increasing");
  }
  for (std::size_t k = 0; k < bumps.size(); ++k) {
    const Bump& b = bumps[k];
    if (!std::isfinite(b.amplitude) || !std::isfinite(b.cx) || !std::isfinite(b.cy) ||
        !b.shape.allFinite()) {
      throw Error(ErrorKind::invalid_argument, "bump " + std::to_string(k) + " is not finite");
    }
    const bool symmetric = std::abs(b.shape(0, 1) - b.shape(1, 0)) <=
                           1e-12 * std::max(1.0, b.shape.cwiseAbs().maxCoeff());
    const double det = b.shape(0, 0) * b.shape(1, 1) - b.shape(0, 1) * b.shape(1, 0);
    if (!symmetric || !(b.shape(0, 0) > 0.0) || !(det > 0.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "bump " + std::to_string(k) + " shape matrix is not symmetric positive definite");
    }
  }
}

BumpSurfaceSpec BumpSurfaceSpec::standard(Index rows, Index cols) {
  BumpSurfaceSpec s;
  s.rows = rows;
  s.cols = cols;
  Eigen::Matrix2d a, b, c;
  a << 0.60, 0.20, 0.20, 0.40;
  b << 0.35, -0.10, -0.10, 0.50;
  c << 0.30, 0.00, 0.00, 0.80;
  s.bumps = {{3.0, 0.0, 1.0, a}, {-2.5, 0.8, -0.9, b}, {1.5, -1.3, -0.5, c}};
  return s;
}

GroundTruth bump_surface(const BumpSurfaceSpec& spec) {
  spec.validate();
  const Index m = spec.rows;
  const Index n = spec.cols;
  const double hx = spec.hx();
  const double hy = spec.hy();
  GroundTruth t;
  t.surface = Surface{Matrix::Zero(m, n), hx, hy};
  t.gradient = GradientField{Matrix::Zero(m, n), Matrix::Zero(m, n), hx, hy};
  for (const Bump& b : spec.bumps) {
    const Eigen::Matrix2d inv = b.shape.inverse();
    for (Index j = 0; j < n; ++j) {
      const double x = spec.x_min + static_cast<double>(j) * hx;
      for (Index i = 0; i < m; ++i) {
        const double y = spec.y_min + static_cast<double>(i) * hy;
        const Eigen::Vector2d d(x - b.cx, y - b.cy);
        const Eigen::Vector2d s = inv * d;
        const double e = b.amplitude * std::exp(-0.5 * d.dot(s));
        t.surface.heights(i, j) += e;
        t.gradient.zx(i, j) -= e * s(0);
        t.gradient.zy(i, j) -= e * s(1);
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// noise

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "iid") return NoiseKind::iid;
  if (name == "radial" || name == "heteroscedastic_radial") return NoiseKind::heteroscedastic_radial;
  if (name == "outliers") return NoiseKind::outliers;
  throw Error(ErrorKind::invalid_argument, "unknown noise kind '" + std::string(name) + "'");
}

const char* to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::iid: return "iid";
    case NoiseKind::heteroscedastic_radial: return "radial";
    case NoiseKind::outliers: return "outliers";
  }
  return "?";
}

Matrix radial_profile(Index rows, Index cols, double hx, double hy) {
  const double cx = 0.5 * static_cast<double>(cols - 1) * hx;
  const double cy = 0.5 * static_cast<double>(rows - 1) * hy;
  const double rmax = std::hypot(cx, cy);
  Matrix p(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double r = std::hypot(static_cast<double>(j) * hx - cx, static_cast<double>(i) * hy - cy);
      p(i, j) = rmax > 0.0 ? r / rmax : 0.0;
    }
  }
  return p;
}

namespace {

double amplitude(const Matrix& c) { return c.size() == 0 ? 0.0 : c.cwiseAbs().maxCoeff(); }

void corrupt(Matrix& c, Index count, Rng& rng) {
  const double top = c.maxCoeff();
  std::vector<Index> idx(static_cast<std::size_t>(c.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<Index>(k);
  // partial Fisher-Yates: the first `count` slots are a uniform sample
  for (Index k = 0; k < count; ++k) {
    const auto left = static_cast<std::uint64_t>(c.size() - k);
    const Index pick = k + static_cast<Index>(rng.below(left));
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(pick)]);
    c(idx[static_cast<std::size_t>(k)]) = top;
  }
}

}  // namespace

GradientField add_noise(const GradientField& g, const NoiseSpec& spec) {
  validate(g);
  if (!(spec.level >= 0.0) || !std::isfinite(spec.level)) {
    throw Error(ErrorKind::invalid_argument, "noise level must be finite and >= 0");
  }
  if (spec.kind == NoiseKind::outliers && spec.level > 1.0) {
    throw Error(ErrorKind::invalid_argument, "outlier fraction must lie in [0, 1]");
  }
  GradientField out = g;
  if (spec.level == 0.0) return out;

  Rng rng(spec.seed);
  switch (spec.kind) {
    case NoiseKind::iid: {
      const double sx = spec.level * amplitude(g.zx);
      const double sy = spec.level * amplitude(g.zy);
      for (Index k = 0; k < out.zx.size(); ++k) out.zx(k) += sx * rng.normal();
      for (Index k = 0; k < out.zy.size(); ++k) out.zy(k) += sy * rng.normal();
      break;
    }
    case NoiseKind::heteroscedastic_radial: {
      const Matrix p = radial_profile(g.rows(), g.cols(), g.hx, g.hy);
      const double sx = spec.level * amplitude(g.zx);
      const double sy = spec.level * amplitude(g.zy);
      for (Index k = 0; k < out.zx.size(); ++k) out.zx(k) += sx * p(k) * rng.normal();
      for (Index k = 0; k < out.zy.size(); ++k) out.zy(k) += sy * p(k) * rng.normal();
      break;
    }
    case NoiseKind::outliers: {
      const auto count = static_cast<Index>(
          std::floor(spec.level * static_cast<double>(g.rows()) * static_cast<double>(g.cols())));
      corrupt(out.zx, count, rng);
      corrupt(out.zy, count, rng);
      break;
    }
  }
  return out;
}

CovarianceSet radial_covariance(Index rows, Index cols, double hx, double hy, double level,
                                double amp_x, double amp_y) {
  if (!(level > 0.0)) return CovarianceSet::identity(rows, cols);
  const Matrix p2 = radial_profile(rows, cols, hx, hy).cwiseAbs2();
  const double mean = p2.mean();
  Vector a = p2.rowwise().mean();  // along y (m)
  Vector b = p2.colwise().mean().transpose();  // along x (n)
  // keep the weights bounded where the profile vanishes
  const double floor_a = 1e-6 * a.maxCoeff();
  const double floor_b = 1e-6 * b.maxCoeff();
  a = a.cwiseMax(floor_a) / std::sqrt(mean);
  b = b.cwiseMax(floor_b) / std::sqrt(mean);
  const double vx = level * level * amp_x * amp_x;
  const double vy = level * level * amp_y * amp_y;
  CovarianceSet c;
  c.xy = Matrix(a.asDiagonal()) * vx;
  c.xx = Matrix(b.asDiagonal());
  c.yy = Matrix(a.asDiagonal()) * vy;
  c.yx = Matrix(b.asDiagonal());
  return c;
}

// ---------------------------------------------------------------------------
// oracle and metrics

Surface oracle_gls(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy) {
  validate(g);
  const Index m = g.rows();
  const Index n = g.cols();
  if (dx.size() != n || dy.size() != m) {
    throw Error(ErrorKind::dimension, "operator sizes do not match the gradient grid");
  }
  if (m * n > kOracleGuard) {
    throw Error(ErrorKind::guard, "dense oracle limited to " + std::to_string(kOracleGuard) +
                                      " nodes, got " + std::to_string(m * n));
  }
  const Index mn = m * n;
  // column-major vec: vec(Z Dx^T) = (Dx (x) I_m) vec Z, vec(Dy Z) = (I_n (x) Dy) vec Z
  Matrix k = Matrix::Zero(2 * mn, mn);
  const Matrix& ddx = dx.matrix();
  const Matrix& ddy = dy.matrix();
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (ddx(a, b) == 0.0) continue;
      for (Index i = 0; i < m; ++i) k(a * m + i, b * m + i) = ddx(a, b);
    }
    k.block(mn + a * m, a * m, m, m) = ddy;
  }
  Vector rhs(2 * mn);
  rhs.head(mn) = g.zx.reshaped();
  rhs.tail(mn) = g.zy.reshaped();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(k);
  const Vector z = cod.solve(rhs);
  return Surface{mean_free(z.reshaped(m, n)), g.hx, g.hy};
}

TrialMetrics evaluate(const Surface& z, const Surface& z_true, const GradientField& g_meas,
                      const DiffMatrix& dx, const DiffMatrix& dy, const GradientLeverage& lev) {
  if (z.rows() != z_true.rows() || z.cols() != z_true.cols() || z.rows() != g_meas.rows() ||
      z.cols() != g_meas.cols()) {
    throw Error(ErrorKind::dimension, "evaluate: surface and gradient sizes differ");
  }
  if (lev.x.rows() != z.rows() || lev.x.cols() != z.cols()) {
    throw Error(ErrorKind::dimension, "evaluate: leverage size differs from the grid");
  }
  TrialMetrics t;
  const Matrix rx = apply_dx(z.heights, dx) - g_meas.zx;
  const Matrix ry = apply_dy(z.heights, dy) - g_meas.zy;
  t.cost_residual = rx.squaredNorm() + ry.squaredNorm();

  const Matrix zt = mean_free(z_true.heights);
  const double diff = (mean_free(z.heights) - zt).norm();
  const double ref = zt.norm();
  t.rel_error = ref > 0.0 ? diff / ref : diff;

  const std::vector<double> s = studentized_residuals(rx, ry, lev);
  t.ks_statistic = s.empty() ? 0.0 : ks_statistic_normal(s);
  return t;
}

TrialMetrics evaluate(const Surface& z, const Surface& z_true, const GradientField& g_meas,
                      const DiffMatrix& dx, const DiffMatrix& dy) {
  return evaluate(z, z_true, g_meas, dx, dy, gls_leverage(dx, dy));
}

// ---------------------------------------------------------------------------
// Monte-Carlo

std::vector<MethodConfig> default_methods(double spacing) {
  auto make = [](std::string label, MethodKind kind) {
    MethodConfig c;
    c.label = std::move(label);
    c.kind = kind;
    return c;
  };
  std::vector<MethodConfig> v;
  v.push_back(make("gls", MethodKind::gls));
  v.push_back(make("spectral-cosine", MethodKind::spectral));
  MethodConfig band = make("spectral-gram-bandpass", MethodKind::spectral);
  band.family = BasisFamily::gram;
  band.drop = {0, 1};
  v.push_back(band);
  MethodConfig t0 = make("tikhonov-0", MethodKind::tikhonov);
  t0.lcurve = true;
  v.push_back(t0);
  MethodConfig t1 = make("tikhonov-1", MethodKind::tikhonov);
  t1.degree = 1;
  t1.lambda = 0.1;
  v.push_back(t1);
  MethodConfig t2 = make("tikhonov-2", MethodKind::tikhonov);
  t2.degree = 2;
  t2.lambda = spacing;
  v.push_back(t2);
  v.push_back(make("weighted", MethodKind::weighted));
  v.push_back(make("dirichlet", MethodKind::dirichlet));
  return v;
}

MethodSpec instantiate(const MethodConfig& config, const GroundTruth& truth,
                       const GradientField& g_meas, const NoiseSpec& noise,
                       const DiffMatrix& dx, const DiffMatrix& dy) {
  const Index m = g_meas.rows();
  const Index n = g_meas.cols();
  switch (config.kind) {
    case MethodKind::gls:
      return GlsMethod{};
    case MethodKind::spectral: {
      if (!(config.keep_fraction > 0.0) || config.keep_fraction > 1.0) {
        throw Error(ErrorKind::invalid_argument, "keep fraction must lie in (0, 1]");
      }
      const auto p = static_cast<Index>(std::ceil(config.keep_fraction * static_cast<double>(m)));
      const auto q = static_cast<Index>(std::ceil(config.keep_fraction * static_cast<double>(n)));
      return truncated_spectral(config.family, m, n, p, q, config.drop);
    }
    case MethodKind::tikhonov: {
      TikhonovMethod t;
      t.degree = config.degree;
      t.lambda = config.lambda;
      if (config.lcurve) {
        if (config.degree != 0) {
          throw Error(ErrorKind::invalid_argument, "L-curve selection needs the standard form");
        }
        const SpectralCache cache = build_cache(g_meas, dx, dy);
        const std::vector<double> grid = default_lambda_grid(cache);
        t.lambda = corner(l_curve(cache, grid));
      }
      return t;
    }
    case MethodKind::dirichlet: {
      Matrix frame = truth.surface.heights;
      if (m > 2 && n > 2) frame.block(1, 1, m - 2, n - 2).setZero();
      return DirichletMethod{std::move(frame)};
    }
    case MethodKind::weighted: {
      if (noise.kind == NoiseKind::heteroscedastic_radial) {
        return WeightedMethod{radial_covariance(m, n, g_meas.hx, g_meas.hy, noise.level,
                                                amplitude(truth.gradient.zx),
                                                amplitude(truth.gradient.zy))};
      }
      return WeightedMethod{CovarianceSet::identity(m, n)};
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown method kind");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t level_index, std::size_t trial) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(level_index) << 32) | static_cast<std::uint64_t>(trial);
  return mix_seed(base_seed ^ key);
}

namespace {

Summary summarize(const std::vector<TrialMetrics>& v, double TrialMetrics::*field) {
  Summary s;
  if (v.empty()) return s;
  for (const auto& t : v) s.mean += t.*field;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (const auto& t : v) ss += (t.*field - s.mean) * (t.*field - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

}  // namespace

MonteCarloTable monte_carlo(const MonteCarloConfig& config) {
  if (config.trials < 1) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (config.levels.empty()) throw Error(ErrorKind::invalid_argument, "no noise levels given");
  for (double l : config.levels) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw Error(ErrorKind::invalid_argument, "noise levels must be finite and >= 0");
    }
    if (config.noise == NoiseKind::outliers && l > 1.0) {
      throw Error(ErrorKind::invalid_argument, "outlier fraction must lie in [0, 1]");
    }
  }

  const GroundTruth truth = bump_surface(config.surface);
  const DiffMatrix dx(config.surface.cols, truth.surface.hx, config.order);
  const DiffMatrix dy(config.surface.rows, truth.surface.hy, config.order);
  const GradientLeverage lev = gls_leverage(dx, dy);
  const std::vector<MethodConfig> methods =
      config.methods.empty() ? default_methods(std::min(truth.surface.hx, truth.surface.hy))
                             : config.methods;

  const std::size_t nl = config.levels.size();
  const auto nt = static_cast<std::size_t>(config.trials);
  MonteCarloTable table;
  table.levels = config.levels;
  for (const auto& mc : methods) table.methods.push_back(mc.label);
  table.raw.assign(methods.size(),
                   std::vector<std::vector<TrialMetrics>>(nl, std::vector<TrialMetrics>(nt)));

  const auto tasks = static_cast<std::ptrdiff_t>(nl * nt);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(tasks));

  auto run = [&](std::ptrdiff_t task) {
    const auto l = static_cast<std::size_t>(task) / nt;
    const auto t = static_cast<std::size_t>(task) % nt;
    try {
      const NoiseSpec noise{config.noise, config.levels[l], trial_seed(config.base_seed, l, t)};
      const GradientField g = add_noise(truth.gradient, noise);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        const MethodSpec spec = instantiate(methods[k], truth, g, noise, dx, dy);
        const Surface z = reconstruct(g, dx, dy, spec);
        table.raw[k][l][t] = evaluate(z, truth.surface, g, dx, dy, lev);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(task)] = std::current_exception();
    }
  };

#ifdef GRADSURF_HAVE_OPENMP
  if (config.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t task = 0; task < tasks; ++task) run(task);
  } else {
    for (std::ptrdiff_t task = 0; task < tasks; ++task) run(task);
  }
#else
  for (std::ptrdiff_t task = 0; task < tasks; ++task) run(task);
#endif

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t k = 0; k < methods.size(); ++k) {
    for (std::size_t l = 0; l < nl; ++l) {
      const auto& cell = table.raw[k][l];
      table.rows.push_back({methods[k].label, config.levels[l],
                            summarize(cell, &TrialMetrics::cost_residual),
                            summarize(cell, &TrialMetrics::rel_error),
                            summarize(cell, &TrialMetrics::ks_statistic)});
    }
  }
  return table;
}

void write_csv(std::ostream& os, const MonteCarloTable& table) {
  const auto trials = table.raw.empty() || table.raw[0].empty() ? std::size_t{0}
                                                                 : table.raw[0][0].size();
  // shortest round-trip form of each value
  auto num = [](double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
  };
  os << "method,level,trials,cost_mean,cost_std,rel_error_mean,rel_error_std,ks_mean,ks_std\n";
  for (const auto& r : table.rows) {
    os << r.method << ',' << num(r.level) << ',' << trials << ',' << num(r.cost_residual.mean) << ','
       << num(r.cost_residual.stddev) << ',' << num(r.rel_error.mean) << ','
       << num(r.rel_error.stddev) << ',' << num(r.ks_statistic.mean) << ','
       << num(r.ks_statistic.stddev) << '\n';
  }
}

}  // namespace gradsurf
