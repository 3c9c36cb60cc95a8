#pragma once

#include "gradsurf/basis.hpp"
#include "gradsurf/diffops.hpp"
#include "gradsurf/reconstruct.hpp"
#include "gradsurf/stats.hpp"
#include "gradsurf/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gradsurf {

/// One anisotropic Gaussian term A exp(-1/2 d^T S^{-1} d), d = (x - cx, y - cy).
struct Bump {
  double amplitude = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Eigen::Matrix2d shape = Eigen::Matrix2d::Identity();
};

struct BumpSurfaceSpec {
  std::vector<Bump> bumps;
  Index rows = 150;
  Index cols = 150;
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = -3.0;
  double y_max = 3.0;

  double hx() const { return (x_max - x_min) / static_cast<double>(cols - 1); }
  double hy() const { return (y_max - y_min) / static_cast<double>(rows - 1); }
  void validate() const;

  /// Fixed three-bump "peaks"-like test surface on [-3, 3]^2:
  ///   +3.0 at (0.0, 1.0),  shape [[0.60, 0.20], [0.20, 0.40]]
  ///   -2.5 at (0.8, -0.9), shape [[0.35, -0.10], [-0.10, 0.50]]
  ///   +1.5 at (-1.3, -0.5), shape [[0.30, 0.00], [0.00, 0.80]]
  static BumpSurfaceSpec standard(Index rows = 150, Index cols = 150);
};

struct GroundTruth {
  Surface surface;
  GradientField gradient;  // closed-form partial derivatives on the grid
};

GroundTruth bump_surface(const BumpSurfaceSpec& spec);

enum class NoiseKind { iid, heteroscedastic_radial, outliers };

NoiseKind parse_noise_kind(std::string_view name);
const char* to_string(NoiseKind kind) noexcept;

/// level is sigma as a fraction of the gradient amplitude (max |g| per
/// component) for the Gaussian kinds, and the corrupted fraction of pixels
/// for outliers.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::iid;
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// iid: N(0, (level*amp)^2) on every entry. heteroscedastic_radial: sigma
/// grows linearly from 0 at the grid center to level*amp at the farthest
/// corner. outliers: floor(level*m*n) positions per component, drawn
/// without replacement, are overwritten with that component's maximum.
GradientField add_noise(const GradientField& g, const NoiseSpec& spec);

/// Relative radial sigma profile r / r_max in [0, 1] used by
/// heteroscedastic_radial.
Matrix radial_profile(Index rows, Index cols, double hx, double hy);

/// Diagonal covariances matching the radial noise: the per-pixel variance
/// s_ij^2 is approximated by the separable a_i b_j / mean(s^2), a and b
/// being its row and column means.
CovarianceSet radial_covariance(Index rows, Index cols, double hx, double hy, double level,
                                double amp_x, double amp_y);

/// Dense vectorized least-squares solution via a complete orthogonal
/// decomposition of the stacked 2mn x mn Kronecker system (minimum norm,
/// hence mean-free). Refuses grids with m*n above `kOracleGuard`.
inline constexpr Index kOracleGuard = 4096;
Surface oracle_gls(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy);

struct TrialMetrics {
  double cost_residual = 0.0;  // gradient cost of the reconstruction
  double rel_error = 0.0;      // mean-aligned relative height error
  double ks_statistic = 0.0;   // KS distance of studentized residuals from N(0,1)
};

TrialMetrics evaluate(const Surface& z, const Surface& z_true, const GradientField& g_meas,
                      const DiffMatrix& dx, const DiffMatrix& dy);
TrialMetrics evaluate(const Surface& z, const Surface& z_true, const GradientField& g_meas,
                      const DiffMatrix& dx, const DiffMatrix& dy, const GradientLeverage& lev);

// ---------------------------------------------------------------------------
// Monte-Carlo harness

enum class MethodKind { gls, spectral, tikhonov, dirichlet, weighted };

/// Recipe for a method, instantiated per problem (bases sized to the grid,
/// Dirichlet boundary taken from the ground truth, covariances from the
/// noise model, lambda from the L-curve if requested).
struct MethodConfig {
  std::string label;
  MethodKind kind = MethodKind::gls;
  BasisFamily family = BasisFamily::cosine;
  double keep_fraction = 0.5;   // spectral: keep ceil(fraction * size) functions
  std::vector<Index> drop;      // spectral: family indices removed (band-pass)
  int degree = 0;               // tikhonov
  double lambda = 0.0;          // tikhonov, absolute
  bool lcurve = false;          // tikhonov degree 0: pick lambda at the L-curve corner
};

/// GLS, spectral-cosine (half), spectral-gram band-pass (half, constant and
/// linear removed), Tikhonov standard (L-curve), degree-1 (lambda 0.1),
/// degree-2 (lambda = grid spacing), weighted, Dirichlet.
std::vector<MethodConfig> default_methods(double spacing);

MethodSpec instantiate(const MethodConfig& config, const GroundTruth& truth,
                       const GradientField& g_meas, const NoiseSpec& noise,
                       const DiffMatrix& dx, const DiffMatrix& dy);

enum class Execution { serial, parallel };

struct MonteCarloConfig {
  BumpSurfaceSpec surface = BumpSurfaceSpec::standard();
  int order = 4;
  NoiseKind noise = NoiseKind::iid;
  std::vector<double> levels = {0.0, 0.025, 0.05, 0.075, 0.1};
  int trials = 10;
  std::uint64_t base_seed = 1;
  std::vector<MethodConfig> methods;  // empty: default_methods()
  Execution execution = Execution::parallel;
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
};

struct MonteCarloRow {
  std::string method;
  double level = 0.0;
  Summary cost_residual;
  Summary rel_error;
  Summary ks_statistic;
};

struct MonteCarloTable {
  std::vector<MonteCarloRow> rows;
  /// raw[method][level][trial]
  std::vector<std::vector<std::vector<TrialMetrics>>> raw;
  std::vector<std::string> methods;
  std::vector<double> levels;
};

/// Seed of trial t at level index l.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t level_index, std::size_t trial);

MonteCarloTable monte_carlo(const MonteCarloConfig& config);

/// method,level,trials,cost_mean,cost_std,rel_error_mean,rel_error_std,ks_mean,ks_std
void write_csv(std::ostream& os, const MonteCarloTable& table);

}  // namespace gradsurf
