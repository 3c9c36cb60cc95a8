#pragma once

#include "gradsurf/diffops.hpp"
#include "gradsurf/types.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace gradsurf {

/// Seeded generator for every randomized operation. Bits come from
/// std::mt19937_64; uniforms and normals are derived here (53-bit mantissa
/// uniforms, Box-Muller normals) so that streams do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();            // [0, 1)
  double normal();             // N(0, 1)
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t x);

double normal_cdf(double x);

/// Two-sided Kolmogorov-Smirnov distance between the sample's empirical CDF
/// and the standard normal CDF.
double ks_statistic_normal(std::vector<double> samples);

/// Asymptotic p-value of a KS distance d from n samples (Kolmogorov series
/// with Stephens' finite-n correction).
double ks_pvalue(double d, std::size_t n);

/// Leverages (hat-matrix diagonals) of the GLS least-squares problem for each
/// gradient sample, computed from the eigendecompositions of Dx^T Dx and
/// Dy^T Dy in O(m^2 n + m n^2).
struct GradientLeverage {
  Matrix x;  // m x n, leverage of the x-derivative samples
  Matrix y;  // m x n, leverage of the y-derivative samples
};

GradientLeverage gls_leverage(const DiffMatrix& dx, const DiffMatrix& dy);

/// Gradient residuals studentized by the GLS leverages with one sigma
/// estimate per component, pooled into a single sample.
std::vector<double> studentized_residuals(const Matrix& rx, const Matrix& ry,
                                          const GradientLeverage& lev);

}  // namespace gradsurf
