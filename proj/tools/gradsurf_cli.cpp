// gradsurf: reconstruct surfaces from gradient grids, run the Monte-Carlo
// harness and the timing benchmark.

#include "gradsurf/basis.hpp"
#include "gradsurf/diffops.hpp"
#include "gradsurf/grid_io.hpp"
#include "gradsurf/reconstruct.hpp"
#include "gradsurf/regparam.hpp"
#include "gradsurf/simulate.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace gradsurf;

namespace {

struct Inputs {
  std::string zx_path;
  std::string zy_path;
  std::string out;
  double hx = 1.0;  // CSV inputs only
  double hy = 1.0;
  int order = 4;
};

void add_inputs(CLI::App* cmd, Inputs& in, bool needs_out = true) {
  cmd->add_option("zx", in.zx_path, "x-derivative grid (G2S1 binary or .csv)")->required();
  cmd->add_option("zy", in.zy_path, "y-derivative grid")->required();
  auto* out = cmd->add_option("-o,--out", in.out, "output path");
  if (needs_out) out->required();
  cmd->add_option("--hx", in.hx, "x spacing for CSV inputs")->check(CLI::PositiveNumber);
  cmd->add_option("--hy", in.hy, "y spacing for CSV inputs")->check(CLI::PositiveNumber);
  cmd->add_option("--order", in.order, "differentiation order")->check(CLI::IsMember({2, 4}));
}

GradientField load_gradient(const Inputs& in) {
  Grid x = read_grid(in.zx_path, in.hx, in.hy);
  Grid y = read_grid(in.zy_path, in.hx, in.hy);
  if (x.values.rows() != y.values.rows() || x.values.cols() != y.values.cols()) {
    throw Error(ErrorKind::dimension, "gradient grids differ in size: " +
                                          std::to_string(x.values.rows()) + "x" +
                                          std::to_string(x.values.cols()) + " vs " +
                                          std::to_string(y.values.rows()) + "x" +
                                          std::to_string(y.values.cols()));
  }
  if (x.hx != y.hx || x.hy != y.hy) {
    throw Error(ErrorKind::format, "gradient grids carry different spacings");
  }
  GradientField g{std::move(x.values), std::move(y.values), x.hx, x.hy};
  validate(g);
  return g;
}

Matrix load_matrix(const std::string& path, Index rows, Index cols, const char* what) {
  Grid g = read_grid(path);
  if (g.values.rows() != rows || g.values.cols() != cols) {
    throw Error(ErrorKind::dimension, std::string(what) + " must be " + std::to_string(rows) +
                                          "x" + std::to_string(cols) + ", got " +
                                          std::to_string(g.values.rows()) + "x" +
                                          std::to_string(g.values.cols()));
  }
  return std::move(g.values);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void run_method(const Inputs& in, const std::function<MethodSpec(const GradientField&)>& make) {
  const GradientField g = load_gradient(in);
  const DiffMatrix dx(g.cols(), g.hx, in.order);
  const DiffMatrix dy(g.rows(), g.hy, in.order);
  const MethodSpec spec = make(g);
  const Surface z = reconstruct(g, dx, dy, spec);
  write_grid(in.out, Grid{z.heights, z.hx, z.hy});
  std::cout << "cost " << fmt(gradient_cost(z.heights, g, dx, dy)) << '\n';
}

double lcurve_lambda(const GradientField& g, int order, std::size_t count) {
  const DiffMatrix dx(g.cols(), g.hx, order);
  const DiffMatrix dy(g.rows(), g.hy, order);
  const SpectralCache cache = build_cache(g, dx, dy);
  const auto grid = default_lambda_grid(cache, count);
  return corner(l_curve(cache, grid));
}

// --------------------------------------------------------------------------
// bench

struct BenchRow {
  std::string name;
  std::function<void()> body;
};

std::vector<BenchRow> bench_rows(const GradientField& g, const Surface& truth, const DiffMatrix& dx,
                                 const DiffMatrix& dy, double lambda) {
  const Index m = g.rows();
  const Index n = g.cols();
  Matrix frame = truth.heights;
  frame.block(1, 1, m - 2, n - 2).setZero();
  const SpectralMethod half =
      truncated_spectral(BasisFamily::cosine, m, n, (m + 1) / 2, (n + 1) / 2);
  const CovarianceSet cov = CovarianceSet::identity(m, n);
  return {
      {"GLS", [&g, &dx, &dy] { reconstruct(g, dx, dy, GlsMethod{}); }},
      {"SVD", [&g, &dx, &dy] { reconstruct_from_cache(build_cache(g, dx, dy), 0.0); }},
      {"Spectral", [&g, &dx, &dy, half] { reconstruct(g, dx, dy, half); }},
      {"Dirichlet", [&g, &dx, &dy, frame] { reconstruct(g, dx, dy, DirichletMethod{frame}); }},
      {"Tikhonov known lambda",
       [&g, &dx, &dy, lambda] {
         TikhonovMethod t;
         t.lambda = lambda;
         reconstruct(g, dx, dy, t);
       }},
      {"Weighted", [&g, &dx, &dy, cov] { reconstruct(g, dx, dy, WeightedMethod{cov}); }},
      {"Tikhonov L-curve",
       [&g, &dx, &dy] {
         const SpectralCache cache = build_cache(g, dx, dy);
         const auto grid = default_lambda_grid(cache);
         reconstruct_from_cache(cache, corner(l_curve(cache, grid)));
       }},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surface reconstruction from gradient fields"};
  app.require_subcommand(1);

  Inputs in;
  double lambda = 0.0;
  std::optional<double> mu;
  int degree = 0;
  bool use_lcurve = false;
  std::size_t lcurve_count = 20;
  std::string basis = "cosine";
  Index p = 0;
  Index q = 0;
  std::vector<Index> drop;
  std::string boundary;
  std::string cov_xx, cov_xy, cov_yx, cov_yy;

  auto* gls = app.add_subcommand("gls", "plain global least squares");
  add_inputs(gls, in);

  auto* spectral = app.add_subcommand("spectral", "truncated basis-function series");
  add_inputs(spectral, in);
  spectral->add_option("--basis", basis, "basis family")
      ->check(CLI::IsMember({"cosine", "gram", "haar"}));
  spectral->add_option("--p", p, "functions along y (default: half the rows)");
  spectral->add_option("--q", q, "functions along x (default: half the columns)");
  spectral->add_option("--drop-cols", drop, "family indices removed in both directions")
      ->delimiter(',');

  auto* tik = app.add_subcommand("tikhonov", "Tikhonov regularization");
  add_inputs(tik, in);
  auto* lam_opt = tik->add_option("--lambda", lambda, "x-direction weight")
                      ->check(CLI::NonNegativeNumber);
  tik->add_option("--mu", mu, "y-direction weight (default lambda)")->check(CLI::NonNegativeNumber);
  tik->add_option("--degree", degree, "derivative degree of the penalty")
      ->check(CLI::IsMember({0, 1, 2}));
  auto* lc_flag = tik->add_flag("--lcurve", use_lcurve, "choose lambda at the L-curve corner");
  lam_opt->excludes(lc_flag);
  tik->add_option("--count", lcurve_count, "L-curve grid size")->check(CLI::Range(5, 10000));

  auto* dir = app.add_subcommand("dirichlet", "prescribed boundary heights");
  add_inputs(dir, in);
  dir->add_option("--boundary", boundary, "height grid; its frame is imposed")->required();

  auto* wls = app.add_subcommand("wls", "covariance-weighted least squares");
  add_inputs(wls, in);
  wls->add_option("--cov-xx", cov_xx, "n x n covariance of Zx along x");
  wls->add_option("--cov-xy", cov_xy, "m x m covariance of Zx along y");
  wls->add_option("--cov-yx", cov_yx, "n x n covariance of Zy along x");
  wls->add_option("--cov-yy", cov_yy, "m x m covariance of Zy along y");

  auto* lc = app.add_subcommand("lcurve", "emit lambda,rho,eta for the standard-form problem");
  add_inputs(lc, in, false);
  lc->add_option("--count", lcurve_count, "grid size")->check(CLI::Range(2, 100000));

  // simulate
  Index size = 150;
  int trials = 10;
  std::uint64_t seed = 1;
  std::vector<double> levels = {0.0, 0.025, 0.05, 0.075, 0.1};
  std::string noise = "iid";
  std::string dump;
  double dump_level = 0.0;
  std::string gradient_kind = "analytic";
  bool serial = false;
  std::string sim_out;
  int sim_order = 4;
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo run on the bump test surface");
  sim->add_option("--size", size, "grid edge length")->check(CLI::Range(4, 4096));
  sim->add_option("--trials", trials, "trials per level")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "base seed");
  sim->add_option("--levels", levels, "noise levels")->delimiter(',');
  sim->add_option("--noise", noise, "noise model")->check(CLI::IsMember({"iid", "radial", "outliers"}));
  sim->add_option("--order", sim_order, "differentiation order")->check(CLI::IsMember({2, 4}));
  sim->add_flag("--serial", serial, "run trials on one thread");
  sim->add_option("-o,--out", sim_out, "metrics CSV (default stdout)");
  sim->add_option("--dump", dump,
                  "write PREFIX_zx.g2s, PREFIX_zy.g2s, PREFIX_z.g2s instead of running trials");
  sim->add_option("--dump-level", dump_level, "noise level of the dumped gradient")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--gradient", gradient_kind,
                  "dumped gradient: analytic partials or the operators applied to the heights")
      ->check(CLI::IsMember({"analytic", "discrete"}));

  // bench
  std::vector<Index> sizes = {128, 256, 512};
  int repeats = 10;
  std::vector<std::string> only;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "time every method across grid sizes");
  bench->add_option("--sizes", sizes, "grid edge lengths")->delimiter(',');
  bench->add_option("--repeats", repeats, "timed repetitions per cell")->check(CLI::PositiveNumber);
  bench->add_option("--methods", only, "subset of rows to time")->delimiter(',');
  bench->add_option("--seed", seed, "noise seed");
  bench->add_option("--order", sim_order, "differentiation order")->check(CLI::IsMember({2, 4}));
  bench->add_option("-o,--out", bench_out, "timing CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gls->parsed()) {
      run_method(in, [](const GradientField&) -> MethodSpec { return GlsMethod{}; });
    } else if (spectral->parsed()) {
      run_method(in, [&](const GradientField& g) -> MethodSpec {
        const Index pp = p > 0 ? p : (g.rows() + 1) / 2;
        const Index qq = q > 0 ? q : (g.cols() + 1) / 2;
        return truncated_spectral(parse_basis_family(basis), g.rows(), g.cols(), pp, qq, drop);
      });
    } else if (tik->parsed()) {
      if (!use_lcurve && lam_opt->count() == 0) {
        throw Error(ErrorKind::invalid_argument, "tikhonov needs --lambda or --lcurve");
      }
      run_method(in, [&](const GradientField& g) -> MethodSpec {
        TikhonovMethod t;
        t.degree = degree;
        t.lambda = lambda;
        t.mu = mu;
        if (use_lcurve) {
          if (degree != 0 || mu) {
            throw Error(ErrorKind::invalid_argument, "--lcurve applies to degree 0 with mu = lambda");
          }
          t.lambda = lcurve_lambda(g, in.order, lcurve_count);
          std::cout << "lambda " << fmt(t.lambda) << '\n';
        }
        return t;
      });
    } else if (dir->parsed()) {
      run_method(in, [&](const GradientField& g) -> MethodSpec {
        return DirichletMethod{load_matrix(boundary, g.rows(), g.cols(), "boundary grid")};
      });
    } else if (wls->parsed()) {
      run_method(in, [&](const GradientField& g) -> MethodSpec {
        CovarianceSet c = CovarianceSet::identity(g.rows(), g.cols());
        if (!cov_xx.empty()) c.xx = load_matrix(cov_xx, g.cols(), g.cols(), "--cov-xx");
        if (!cov_xy.empty()) c.xy = load_matrix(cov_xy, g.rows(), g.rows(), "--cov-xy");
        if (!cov_yx.empty()) c.yx = load_matrix(cov_yx, g.cols(), g.cols(), "--cov-yx");
        if (!cov_yy.empty()) c.yy = load_matrix(cov_yy, g.rows(), g.rows(), "--cov-yy");
        return WeightedMethod{std::move(c)};
      });
    } else if (lc->parsed()) {
      const GradientField g = load_gradient(in);
      const DiffMatrix dx(g.cols(), g.hx, in.order);
      const DiffMatrix dy(g.rows(), g.hy, in.order);
      const SpectralCache cache = build_cache(g, dx, dy);
      const auto grid = default_lambda_grid(cache, lcurve_count);
      const auto pts = l_curve(cache, grid);
      std::ostringstream os;
      os << std::setprecision(17) << "lambda,rho,eta\n";
      for (const auto& pt : pts) os << pt.lambda << ',' << pt.rho << ',' << pt.eta << '\n';
      if (in.out.empty()) {
        std::cout << os.str();
      } else {
        write_file_atomic(in.out, os.str());
      }
      if (pts.size() >= 5) std::cerr << "corner " << fmt(corner(pts)) << '\n';
    } else if (sim->parsed()) {
      const BumpSurfaceSpec spec = BumpSurfaceSpec::standard(size, size);
      if (!dump.empty()) {
        const GroundTruth t = bump_surface(spec);
        GradientField g = t.gradient;
        if (gradient_kind == "discrete") {
          const DiffMatrix dx(spec.cols, spec.hx(), sim_order);
          const DiffMatrix dy(spec.rows, spec.hy(), sim_order);
          g.zx = apply_dx(t.surface.heights, dx);
          g.zy = apply_dy(t.surface.heights, dy);
        }
        g = add_noise(g, NoiseSpec{parse_noise_kind(noise), dump_level, seed});
        write_grid(dump + "_zx.g2s", Grid{g.zx, g.hx, g.hy});
        write_grid(dump + "_zy.g2s", Grid{g.zy, g.hx, g.hy});
        write_grid(dump + "_z.g2s", Grid{t.surface.heights, t.surface.hx, t.surface.hy});
        return 0;
      }
      MonteCarloConfig cfg;
      cfg.surface = spec;
      cfg.order = sim_order;
      cfg.noise = parse_noise_kind(noise);
      cfg.levels = levels;
      cfg.trials = trials;
      cfg.base_seed = seed;
      cfg.execution = serial ? Execution::serial : Execution::parallel;
      const MonteCarloTable table = monte_carlo(cfg);
      std::ostringstream os;
      write_csv(os, table);
      if (sim_out.empty()) {
        std::cout << os.str();
      } else {
        write_file_atomic(sim_out, os.str());
      }
    } else if (bench->parsed()) {
      for (Index s : sizes) {
        if (s < 8) throw Error(ErrorKind::invalid_argument, "bench sizes must be >= 8");
      }
      std::vector<std::string> names;
      std::map<std::string, std::vector<double>> seconds;
      for (Index s : sizes) {
        const GroundTruth t = bump_surface(BumpSurfaceSpec::standard(s, s));
        const GradientField g = add_noise(t.gradient, NoiseSpec{NoiseKind::iid, 0.05, seed});
        const DiffMatrix dx(s, g.hx, sim_order);
        const DiffMatrix dy(s, g.hy, sim_order);
        for (const BenchRow& row : bench_rows(g, t.surface, dx, dy, 0.1)) {
          if (!only.empty() && std::find(only.begin(), only.end(), row.name) == only.end()) {
            continue;
          }
          row.body();  // warm-up
          const auto t0 = std::chrono::steady_clock::now();
          for (int r = 0; r < repeats; ++r) row.body();
          const auto t1 = std::chrono::steady_clock::now();
          if (!seconds.count(row.name)) names.push_back(row.name);
          seconds[row.name].push_back(std::chrono::duration<double>(t1 - t0).count() / repeats);
        }
      }
      if (names.empty()) throw Error(ErrorKind::invalid_argument, "--methods selects no rows");
      std::ostringstream os;
      os << "method";
      for (Index s : sizes) os << ',' << s;
      os << '\n' << std::setprecision(6);
      for (const auto& name : names) {
        os << name;
        for (double v : seconds[name]) os << ',' << v;
        os << '\n';
      }
      if (bench_out.empty()) {
        std::cout << os.str();
      } else {
        write_file_atomic(bench_out, os.str());
      }
    }
  } catch (const Error& e) {
    std::cerr << "gradsurf: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 10 + static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "gradsurf: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
