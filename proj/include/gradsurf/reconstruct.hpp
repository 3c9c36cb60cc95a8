#pragma once

#include "gradsurf/basis.hpp"
#include "gradsurf/diffops.hpp"
#include "gradsurf/sylvester.hpp"
#include "gradsurf/types.hpp"

#include <optional>
#include <string>
#include <variant>

namespace gradsurf {

/// Plain global least squares.
struct GlsMethod {};

/// Truncated generalized Fourier series Z = By C Bx^T. The basis sets may be
/// column-sliced (low-pass or band-pass).
struct SpectralMethod {
  BasisSet bx;
  BasisSet by;
};

/// Tikhonov regularization. Degree 0 is the standard form (identity
/// smoothing operators); degree k >= 1 penalizes the k-th derivative through
/// D^k. mu defaults to lambda; z0 defaults to the flat surface.
struct TikhonovMethod {
  double lambda = 0.0;
  std::optional<double> mu;
  int degree = 0;
  std::optional<Matrix> z0;

  double effective_mu() const { return mu.value_or(lambda); }
};

/// Prescribed heights on the domain frame. Interior entries of `boundary`
/// act as an a-priori offset surface.
struct DirichletMethod {
  Matrix boundary;
};

/// Covariances of the gradient errors: xx and yx are n x n (along x),
/// xy and yy are m x m (along y). Lambda_uv is the covariance of the
/// u-derivative in the v-direction.
struct CovarianceSet {
  Matrix xx;
  Matrix xy;
  Matrix yx;
  Matrix yy;

  static CovarianceSet identity(Index m, Index n);
  void validate(Index m, Index n) const;
};

struct WeightedMethod {
  CovarianceSet covariance;
};

using MethodSpec =
    std::variant<GlsMethod, SpectralMethod, TikhonovMethod, DirichletMethod, WeightedMethod>;

std::string method_name(const MethodSpec& spec);

/// Spectral method keeping the lowest ceil(m/2) x ceil(n/2) functions of the
/// family, with optional family indices removed from both directions.
SpectralMethod truncated_spectral(BasisFamily family, Index m, Index n, Index p, Index q,
                                  std::span<const Index> drop = {});

/// Coefficient blocks and null vectors of the method's Sylvester equation.
SylvesterSystem assemble(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                         const MethodSpec& spec);

struct Reconstruction {
  SylvesterSystem system;
  Matrix phi;
  Surface surface;
};

/// Solves the assembled system and maps the parameter matrix back to heights.
Reconstruction reconstruct_detailed(const GradientField& g, const DiffMatrix& dx,
                                    const DiffMatrix& dy, const MethodSpec& spec);

Surface reconstruct(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                    const MethodSpec& spec);

}  // namespace gradsurf
