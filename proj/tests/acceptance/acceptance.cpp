// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit
// status is the number of failures.

#include "gradsurf/basis.hpp"
#include "gradsurf/diffops.hpp"
#include "gradsurf/reconstruct.hpp"
#include "gradsurf/regparam.hpp"
#include "gradsurf/simulate.hpp"
#include "gradsurf/stats.hpp"
#include "gradsurf/sylvester.hpp"

#include "../support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace gradsurf;
namespace ts = testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1 ------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<Index> rows(5, 10), cols(5, 12);
  double worst = 0.0;
  int fields = 0;
  for (int k = 0; k < 24; ++k) {
    const Index m = rows(gen);
    const Index n = cols(gen);
    const int order = k % 2 == 0 ? 2 : 4;
    const double hx = 0.1 + 0.05 * (k % 3);
    const double hy = 0.2 - 0.03 * (k % 4);
    const GradientField g = ts::random_gradient(m, n, gen, hx, hy);
    const DiffMatrix dx(n, hx, order);
    const DiffMatrix dy(m, hy, order);
    const Matrix z = reconstruct(g, dx, dy, GlsMethod{}).heights;
    const Matrix ref = ts::kron_min_norm(g, dx.matrix(), dy.matrix());
    worst = std::max(worst, ts::aligned_diff(z, ref));
    ++fields;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-7 && secs < 5.0 && fields >= 20,
          std::to_string(fields) + " fields, max dev " + num(worst) + ", " + num(secs) + " s"};
}

// 2 ------------------------------------------------------------------------
Outcome exactness() {
  std::mt19937_64 gen(202);
  const Index m = 32, n = 32;
  const double hx = 2.0 / 31.0, hy = 1.5 / 31.0;
  double worst = 0.0;
  int cases = 0;
  for (int order : {2, 4}) {
    const DiffMatrix dx(n, hx, order);
    const DiffMatrix dy(m, hy, order);
    for (int degree = 1; degree <= order; ++degree) {
      for (int rep = 0; rep < 3; ++rep) {
        const ts::Polynomial p = ts::random_polynomial(degree, gen);
        const ts::Sampled s = ts::sample(p, m, n, -1.0, hx, -0.5, hy);
        const Matrix z = reconstruct(s.g, dx, dy, GlsMethod{}).heights;
        worst = std::max(worst, ts::aligned_rel(z, s.z));
        ++cases;
      }
    }
  }
  return {worst <= 1e-9, std::to_string(cases) + " polynomials, max rel error " + num(worst)};
}

// 3 ------------------------------------------------------------------------
Outcome degeneracies() {
  std::mt19937_64 gen(303);
  std::ostringstream msg;
  bool ok = true;

  double spec_worst = 0.0, tik_worst = 0.0, wls_worst = 0.0;
  for (int order : {2, 4}) {
    const Index m = 16, n = 16;
    const GradientField g = ts::random_gradient(m, n, gen, 0.1, 0.1);
    const DiffMatrix dx(n, 0.1, order);
    const DiffMatrix dy(m, 0.1, order);
    const Matrix gls = reconstruct(g, dx, dy, GlsMethod{}).heights;
    for (BasisFamily f : {BasisFamily::cosine, BasisFamily::gram, BasisFamily::haar}) {
      const Matrix z = reconstruct(g, dx, dy, truncated_spectral(f, m, n, m, n)).heights;
      spec_worst = std::max(spec_worst, ts::aligned_diff(z, gls));
    }
    for (int degree : {0, 1, 2}) {
      TikhonovMethod t;
      t.degree = degree;
      const Matrix z = reconstruct(g, dx, dy, t).heights;
      tik_worst = std::max(tik_worst, ts::aligned_diff(z, gls));
    }
    const Matrix w = reconstruct(g, dx, dy, WeightedMethod{CovarianceSet::identity(m, n)}).heights;
    wls_worst = std::max(wls_worst, ts::aligned_diff(w, gls));
  }
  ok = ok && spec_worst <= 1e-8 && tik_worst <= 1e-8 && wls_worst <= 1e-9;

  // Dirichlet: quadratic surface, exact operators, absolute level included
  struct Quad {
    double value(double x, double y) const { return x * x + y * y + 0.5 * x * y - 2.0 * x + 3.0; }
    double dx(double x, double y) const { return 2.0 * x + 0.5 * y - 2.0; }
    double dy(double x, double y) const { return 2.0 * y + 0.5 * x; }
  };
  const Index m = 20, n = 24;
  const ts::Sampled s = ts::sample(Quad{}, m, n, -1.0, 0.1, 0.0, 0.08);
  const DiffMatrix dx(n, 0.1, 2);
  const DiffMatrix dy(m, 0.08, 2);
  Matrix frame = s.z;
  frame.block(1, 1, m - 2, n - 2).setZero();
  const Matrix zd = reconstruct(s.g, dx, dy, DirichletMethod{frame}).heights;
  const double dir_err = ts::max_abs_diff(zd, s.z);
  ok = ok && dir_err <= 1e-8;

  msg << "spectral " << num(spec_worst) << ", tikhonov " << num(tik_worst) << ", weighted "
      << num(wls_worst) << ", dirichlet " << num(dir_err);
  return {ok, msg.str()};
}

// 4 ------------------------------------------------------------------------
Outcome dual_path() {
  const GroundTruth t = bump_surface(BumpSurfaceSpec::standard(24, 24));
  const GradientField g = add_noise(t.gradient, NoiseSpec{NoiseKind::iid, 0.1, 404});
  const DiffMatrix dx(24, t.surface.hx, 4);
  const DiffMatrix dy(24, t.surface.hy, 4);
  const SpectralCache cache = build_cache(g, dx, dy);
  double worst = 0.0;
  for (double lambda : {1e-3, 1e-1, 1.0, 10.0}) {
    TikhonovMethod tm;
    tm.lambda = lambda;
    const Matrix stacked = reconstruct(g, dx, dy, tm).heights;
    const Matrix svd = reconstruct_from_cache(cache, lambda).heights;
    worst = std::max(worst, (stacked - svd).norm() / stacked.norm());
  }
  return {worst <= 1e-8, "max rel difference " + num(worst)};
}

// 5 ------------------------------------------------------------------------
Outcome cost_lower_bound() {
  MonteCarloConfig cfg;
  cfg.surface = BumpSurfaceSpec::standard(64, 64);
  cfg.levels = {0.1};
  cfg.trials = 50;
  cfg.base_seed = 505;
  const MonteCarloTable tab = monte_carlo(cfg);
  const auto gls = std::find(tab.methods.begin(), tab.methods.end(), "gls") - tab.methods.begin();
  int violations = 0;
  double tightest = 1e300;
  for (std::size_t k = 0; k < tab.methods.size(); ++k) {
    if (static_cast<std::ptrdiff_t>(k) == gls) continue;
    for (int t = 0; t < cfg.trials; ++t) {
      const double c0 = tab.raw[gls][0][t].cost_residual;
      const double c1 = tab.raw[k][0][t].cost_residual;
      if (c0 > c1 + 1e-9) ++violations;
      tightest = std::min(tightest, c1 - c0);
    }
  }
  return {violations == 0, std::to_string(tab.methods.size() - 1) + " methods x 50 trials, " +
                               std::to_string(violations) + " violations, smallest margin " +
                               num(tightest)};
}

// 6 ------------------------------------------------------------------------
Outcome residual_normality() {
  const GroundTruth truth = bump_surface(BumpSurfaceSpec::standard(64, 64));
  const DiffMatrix dx(64, truth.surface.hx, 4);
  const DiffMatrix dy(64, truth.surface.hy, 4);
  const GradientLeverage lev = gls_leverage(dx, dy);
  int passed = 0;
  for (std::size_t t = 0; t < 100; ++t) {
    const GradientField g =
        add_noise(truth.gradient, NoiseSpec{NoiseKind::iid, 0.1, trial_seed(606, 0, t)});
    const Matrix z = reconstruct(g, dx, dy, GlsMethod{}).heights;
    const auto r = studentized_residuals(apply_dx(z, dx) - g.zx, apply_dy(z, dy) - g.zy, lev);
    if (ks_pvalue(ks_statistic_normal(r), r.size()) > 0.01) ++passed;
  }
  return {passed >= 95, std::to_string(passed) + "/100 trials pass at alpha 0.01"};
}

// 7 ------------------------------------------------------------------------
Outcome outlier_ordering() {
  MonteCarloConfig cfg;
  cfg.surface = BumpSurfaceSpec::standard(64, 64);
  cfg.noise = NoiseKind::outliers;
  cfg.levels = {0.1};
  cfg.trials = 25;
  cfg.base_seed = 707;
  const MonteCarloTable tab = monte_carlo(cfg);
  std::string best;
  double best_err = 1e300, runner_up = 1e300;
  for (const auto& row : tab.rows) {
    if (row.rel_error.mean < best_err) {
      runner_up = best_err;
      best_err = row.rel_error.mean;
      best = row.method;
    } else {
      runner_up = std::min(runner_up, row.rel_error.mean);
    }
  }
  return {best == "dirichlet", "lowest mean rel_error " + best + " " + num(best_err) +
                                   ", next " + num(runner_up)};
}

// 8 ------------------------------------------------------------------------
// Medians of interleaved timings: one run of each job per round, so a load
// burst on the machine hits every job instead of skewing one of them.
std::vector<double> interleaved_medians(const std::vector<std::function<void()>>& jobs, int rounds) {
  for (const auto& f : jobs) f();
  std::vector<std::vector<double>> t(jobs.size());
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      jobs[k]();
      t[k].push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
  }
  std::vector<double> out;
  for (auto& v : t) {
    std::sort(v.begin(), v.end());
    out.push_back(v[v.size() / 2]);
  }
  return out;
}

Outcome complexity_scaling() {
  auto problem = [](Index s) {
    const GroundTruth t = bump_surface(BumpSurfaceSpec::standard(s, s));
    return add_noise(t.gradient, NoiseSpec{NoiseKind::iid, 0.05, 808});
  };
  const GradientField g8 = problem(256);
  const GradientField g9 = problem(512);
  const DiffMatrix dx8(256, g8.hx, 4), dy8(256, g8.hy, 4);
  const DiffMatrix dx9(512, g9.hx, 4), dy9(512, g9.hy, 4);
  const SpectralMethod half = truncated_spectral(BasisFamily::cosine, 512, 512, 256, 256);

  const std::vector<double> med = interleaved_medians(
      {[&] { reconstruct(g8, dx8, dy8, GlsMethod{}); },
       [&] { reconstruct(g9, dx9, dy9, GlsMethod{}); },
       [&] { reconstruct(g9, dx9, dy9, half); }},
      7);
  const double t8 = med[0], t9 = med[1], ts9 = med[2];
  const double ratio = t9 / t8;
  const double speedup = t9 / ts9;
  return {ratio >= 4.0 && ratio <= 16.0 && speedup >= 3.0,
          "GLS 512/256 time ratio " + num(ratio) + ", half-spectral speedup at 512 " +
              num(speedup)};
}

// 9 ------------------------------------------------------------------------
Outcome work_models() {
  // hand-evaluated: (5/3)m^3 + 10n^3 + 5m^2 n + (5/2)m n^2
  struct Spot {
    Index m, n;
    double hs, vec;
  };
  const Spot spots[] = {
      {3, 6, 45.0 + 2160.0 + 270.0 + 270.0, 41.0 * 27.0 * 216.0},
      {6, 6, 360.0 + 2160.0 + 1080.0 + 540.0, 41.0 * 216.0 * 216.0},
      {12, 4, 2880.0 + 640.0 + 2880.0 + 480.0, 41.0 * 1728.0 * 64.0},
      {300, 600, 45e6 + 2160e6 + 270e6 + 270e6, 41.0 * 27e6 * 216e6},
  };
  bool ok = true;
  double worst = 0.0;
  for (const Spot& s : spots) {
    const double hs = work_estimate(s.m, s.n, WorkModel::hessenberg_schur);
    const double vec = work_estimate(s.m, s.n, WorkModel::vectorized);
    worst = std::max({worst, std::abs(hs - s.hs) / s.hs, std::abs(vec - s.vec) / s.vec});
  }
  ok = worst <= 1e-15;
  bool ratios = true;
  for (int k = 1; k <= 4; ++k) {
    const double full = work_estimate(512, 384, WorkModel::hessenberg_schur);
    const double cut = work_estimate(512, 384, WorkModel::spectral, k);
    ratios = ratios && cut / full == std::ldexp(1.0, -3 * k);
  }
  return {ok && ratios, "max rel deviation " + num(worst) +
                            (ratios ? ", spectral ratios exactly 2^-3k" : ", spectral ratio off")};
}

// 10 -----------------------------------------------------------------------
Outcome stationarity() {
  std::mt19937_64 gen(1010);
  const Index m = 12, n = 14;
  const GroundTruth t = bump_surface(BumpSurfaceSpec::standard(m, n));
  const GradientField g = add_noise(t.gradient, NoiseSpec{NoiseKind::iid, 0.1, 1010});
  const DiffMatrix dx(n, t.surface.hx, 4);
  const DiffMatrix dy(m, t.surface.hy, 4);
  const Matrix& ddx = dx.matrix();
  const Matrix& ddy = dy.matrix();
  auto ls = [&](const Matrix& z) { return ts::ls_cost(z, g, ddx, ddy); };

  double worst = 0.0;
  int solutions = 0;
  auto check = [&](const std::function<double(const Matrix&)>& cost, const Matrix& x) {
    const double scale = cost(Matrix::Zero(x.rows(), x.cols()));
    worst = std::max(worst, ts::max_directional_slope(cost, x, 20, gen) / scale);
    ++solutions;
  };

  check(ls, reconstruct(g, dx, dy, GlsMethod{}).heights);

  for (BasisFamily f : {BasisFamily::cosine, BasisFamily::gram}) {
    const SpectralMethod sm = truncated_spectral(f, m, n, 7, 9);
    const Matrix by = sm.by.matrix(), bx = sm.bx.matrix();
    const Matrix c = reconstruct_detailed(g, dx, dy, sm).phi;
    check([&](const Matrix& x) { return ls(by * x * bx.transpose()); }, c);
  }

  const Matrix z0 = ts::random_matrix(m, n, gen, 0.3);
  for (int degree : {0, 1, 2}) {
    TikhonovMethod tm;
    tm.degree = degree;
    tm.lambda = 0.3;
    tm.mu = 0.7;
    tm.z0 = z0;
    Matrix ly = Matrix::Identity(m, m), lx = Matrix::Identity(n, n);
    for (int k = 0; k < degree; ++k) {
      ly = ddy * ly;
      lx = ddx * lx;
    }
    const Matrix z = reconstruct(g, dx, dy, tm).heights;
    check(
        [&](const Matrix& x) {
          return ls(x) + 0.49 * (ly * (x - z0)).squaredNorm() +
                 0.09 * ((x - z0) * lx.transpose()).squaredNorm();
        },
        z);
  }

  Matrix frame = t.surface.heights;
  frame.block(1, 1, m - 2, n - 2).setZero();
  const Matrix zi = reconstruct_detailed(g, dx, dy, DirichletMethod{frame}).phi;
  check(
      [&](const Matrix& x) {
        Matrix z = frame;
        z.block(1, 1, m - 2, n - 2) += x;
        return ls(z);
      },
      zi);

  CovarianceSet cov{ts::random_spd(n, gen), ts::random_spd(m, gen), ts::random_spd(n, gen),
                    ts::random_spd(m, gen)};
  const Matrix wxx = ts::inv_sqrt(cov.xx), wxy = ts::inv_sqrt(cov.xy);
  const Matrix wyx = ts::inv_sqrt(cov.yx), wyy = ts::inv_sqrt(cov.yy);
  const Matrix zw = reconstruct(g, dx, dy, WeightedMethod{cov}).heights;
  check(
      [&](const Matrix& x) {
        return (wxy * (x * ddx.transpose() - g.zx) * wxx).squaredNorm() +
               (wyy * (ddy * x - g.zy) * wyx).squaredNorm();
      },
      zw);

  return {worst <= 1e-5, std::to_string(solutions) + " solutions x 20 directions, max scaled slope " +
                             num(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"exactness on polynomials", exactness},
      {"method degeneracies", degeneracies},
      {"dual-path tikhonov", dual_path},
      {"cost lower bound", cost_lower_bound},
      {"residual normality", residual_normality},
      {"outlier robustness ordering", outlier_ordering},
      {"complexity scaling", complexity_scaling},
      {"work-model formulas", work_models},
      {"stationarity", stationarity},
  };
  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
