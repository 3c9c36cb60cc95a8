#include "gradsurf/reconstruct.hpp"

#include <functional>

namespace gradsurf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using PhiMap = std::function<Matrix(const Matrix&)>;

struct Assembly {
  SylvesterSystem system;
  PhiMap to_surface;
};

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

Matrix stack_cols(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows(), left.cols() + right.cols());
  out << left, right;
  return out;
}

Matrix power(const Matrix& d, int k) {
  Matrix out = d;
  for (int i = 1; i < k; ++i) out = out * d;
  return out;
}

void check_operators(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy) {
  validate(g);
  if (dx.size() != g.cols() || dy.size() != g.rows()) {
    throw Error(ErrorKind::dimension,
                "operator sizes (" + std::to_string(dy.size()) + ", " +
                    std::to_string(dx.size()) + ") do not match gradient grid " +
                    std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
}

Assembly assemble_gls(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy) {
  SylvesterSystem sys{dy.matrix(), dx.matrix(), g.zy, g.zx,
                      Vector::Ones(g.rows()), Vector::Ones(g.cols())};
  return {std::move(sys), [](const Matrix& phi) { return phi; }};
}

Assembly assemble_spectral(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                           const SpectralMethod& s) {
  if (s.by.nodes() != g.rows() || s.bx.nodes() != g.cols()) {
    throw Error(ErrorKind::dimension, "spectral basis node counts differ from the grid");
  }
  const Matrix& by = s.by.matrix();
  const Matrix& bx = s.bx.matrix();
  SylvesterSystem sys{dy.times(by), dx.times(bx), g.zy * bx, by.transpose() * g.zx,
                      Vector(), Vector()};
  if (s.by.has_constant() && s.bx.has_constant()) {
    sys.u = by.transpose() * Vector::Ones(by.rows());
    sys.v = bx.transpose() * Vector::Ones(bx.rows());
  }
  return {std::move(sys), [by, bx](const Matrix& c) -> Matrix { return by * c * bx.transpose(); }};
}

Assembly assemble_tikhonov(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                           const TikhonovMethod& t) {
  const double lambda = t.lambda;
  const double mu = t.effective_mu();
  if (!(lambda >= 0.0) || !(mu >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "regularization parameters must be non-negative");
  }
  if (t.degree < 0 || t.degree > 2) {
    throw Error(ErrorKind::invalid_argument, "Tikhonov degree must be 0, 1 or 2");
  }
  const Index m = g.rows();
  const Index n = g.cols();
  const Matrix ly = t.degree == 0 ? Matrix(Matrix::Identity(m, m)) : power(dy.matrix(), t.degree);
  const Matrix lx = t.degree == 0 ? Matrix(Matrix::Identity(n, n)) : power(dx.matrix(), t.degree);
  Matrix z0 = Matrix::Zero(m, n);
  if (t.z0) {
    if (t.z0->rows() != m || t.z0->cols() != n) {
      throw Error(ErrorKind::dimension, "a-priori surface size differs from the grid");
    }
    z0 = *t.z0;
  }
  SylvesterSystem sys{stack_rows(dy.matrix(), mu * ly),
                      stack_rows(dx.matrix(), lambda * lx),
                      stack_rows(g.zy, mu * ly * z0),
                      stack_cols(g.zx, lambda * z0 * lx.transpose()),
                      Vector(),
                      Vector()};
  if (t.degree >= 1 || (lambda == 0.0 && mu == 0.0)) {
    sys.u = Vector::Ones(m);
    sys.v = Vector::Ones(n);
  }
  return {std::move(sys), [](const Matrix& phi) { return phi; }};
}

Assembly assemble_dirichlet(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                            const DirichletMethod& d) {
  const Index m = g.rows();
  const Index n = g.cols();
  if (d.boundary.rows() != m || d.boundary.cols() != n) {
    throw Error(ErrorKind::dimension, "boundary grid size differs from the gradient");
  }
  if (m < 3 || n < 3) throw Error(ErrorKind::dimension, "Dirichlet needs at least a 3x3 grid");
  const Matrix& zb = d.boundary;
  // Interior selection P_m, P_n realized as column/row slicing.
  const Matrix ry = g.zy - dy.times(zb);
  const Matrix rx = g.zx - dx.times_transpose(zb);
  SylvesterSystem sys{dy.matrix().middleCols(1, m - 2), dx.matrix().middleCols(1, n - 2),
                      ry.middleCols(1, n - 2), rx.middleRows(1, m - 2), Vector(), Vector()};
  return {std::move(sys), [zb](const Matrix& interior) -> Matrix {
            Matrix z = zb;
            z.block(1, 1, interior.rows(), interior.cols()) += interior;
            return z;
          }};
}

Assembly assemble_weighted(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                           const WeightedMethod& w) {
  const Index m = g.rows();
  const Index n = g.cols();
  w.covariance.validate(m, n);
  const SymmetricRoots xx = sym_sqrt(w.covariance.xx);
  const SymmetricRoots xy = sym_sqrt(w.covariance.xy);
  const SymmetricRoots yx = sym_sqrt(w.covariance.yx);
  const SymmetricRoots yy = sym_sqrt(w.covariance.yy);
  SylvesterSystem sys{yy.inverse_root * dy.matrix() * xy.root,
                      xx.inverse_root * dx.matrix() * yx.root,
                      yy.inverse_root * g.zy * yx.inverse_root,
                      xy.inverse_root * g.zx * xx.inverse_root,
                      xy.inverse_root * Vector::Ones(m),
                      yx.inverse_root * Vector::Ones(n)};
  return {std::move(sys), [l = xy.root, r = yx.root](const Matrix& zw) -> Matrix {
            return l * zw * r;
          }};
}

Assembly assemble_any(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                      const MethodSpec& spec) {
  check_operators(g, dx, dy);
  return std::visit(
      overloaded{
          [&](const GlsMethod&) { return assemble_gls(g, dx, dy); },
          [&](const SpectralMethod& s) { return assemble_spectral(g, dx, dy, s); },
          [&](const TikhonovMethod& t) { return assemble_tikhonov(g, dx, dy, t); },
          [&](const DirichletMethod& d) { return assemble_dirichlet(g, dx, dy, d); },
          [&](const WeightedMethod& w) { return assemble_weighted(g, dx, dy, w); },
      },
      spec);
}

void check_spd_shape(const Matrix& c, Index size, const char* name) {
  if (c.rows() != size || c.cols() != size) {
    throw Error(ErrorKind::dimension, std::string("covariance ") + name + " must be " +
                                          std::to_string(size) + "x" + std::to_string(size));
  }
}

}  // namespace

CovarianceSet CovarianceSet::identity(Index m, Index n) {
  return {Matrix::Identity(n, n), Matrix::Identity(m, m), Matrix::Identity(n, n),
          Matrix::Identity(m, m)};
}

void CovarianceSet::validate(Index m, Index n) const {
  check_spd_shape(xx, n, "xx");
  check_spd_shape(xy, m, "xy");
  check_spd_shape(yx, n, "yx");
  check_spd_shape(yy, m, "yy");
  // positive definiteness is checked by sym_sqrt during assembly
}

std::string method_name(const MethodSpec& spec) {
  return std::visit(overloaded{
                        [](const GlsMethod&) -> std::string { return "gls"; },
                        [](const SpectralMethod& s) -> std::string {
                          return std::string("spectral-") + to_string(s.bx.family());
                        },
                        [](const TikhonovMethod& t) -> std::string {
                          return "tikhonov-" + std::to_string(t.degree);
                        },
                        [](const DirichletMethod&) -> std::string { return "dirichlet"; },
                        [](const WeightedMethod&) -> std::string { return "weighted"; },
                    },
                    spec);
}

SpectralMethod truncated_spectral(BasisFamily family, Index m, Index n, Index p, Index q,
                                  std::span<const Index> drop) {
  BasisSet by = make_basis(family, m, p);
  BasisSet bx = make_basis(family, n, q);
  if (!drop.empty()) {
    by = by.without(drop);
    bx = bx.without(drop);
  }
  return {std::move(bx), std::move(by)};
}

SylvesterSystem assemble(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                         const MethodSpec& spec) {
  return assemble_any(g, dx, dy, spec).system;
}

Reconstruction reconstruct_detailed(const GradientField& g, const DiffMatrix& dx,
                                    const DiffMatrix& dy, const MethodSpec& spec) {
  Assembly as = assemble_any(g, dx, dy, spec);
  Matrix phi = solve(as.system);
  Surface z{as.to_surface(phi), g.hx, g.hy};
  return {std::move(as.system), std::move(phi), std::move(z)};
}

Surface reconstruct(const GradientField& g, const DiffMatrix& dx, const DiffMatrix& dy,
                    const MethodSpec& spec) {
  return reconstruct_detailed(g, dx, dy, spec).surface;
}

}  // namespace gradsurf
