#include "gradsurf/sylvester.hpp"

#include "gradsurf/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <string>

namespace gradsurf {

namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kPencilTolerance = 1e-12;
constexpr double kNullTolerance = 1e-8;

std::string dims(const Matrix& x) {
  return std::to_string(x.rows()) + "x" + std::to_string(x.cols());
}

void require_symmetric(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::dimension, std::string(name) + " must be square, got " + dims(m));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw Error(ErrorKind::invalid_argument, std::string(name) + " is not symmetric");
  }
}

Vector least_squares(const Matrix& a, const Vector& b, const char* what) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < a.cols()) {
    throw Error(ErrorKind::singular,
                std::string("deflated block ") + what + " is rank deficient (rank " +
                    std::to_string(qr.rank()) + " < " + std::to_string(a.cols()) +
                    "); the operator's null space is not one-dimensional");
  }
  return qr.solve(b);
}

}  // namespace

Matrix gram(const Matrix& a) {
  Matrix out = Matrix::Zero(a.cols(), a.cols());
  out.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
  return out;
}

void SylvesterSystem::validate() const {
  const Index m = a.cols();
  const Index n = b.cols();
  if (f.rows() != a.rows() || f.cols() != n) {
    throw Error(ErrorKind::dimension, "F is " + dims(f) + ", expected " +
                                          std::to_string(a.rows()) + "x" + std::to_string(n));
  }
  if (g.rows() != m || g.cols() != b.rows()) {
    throw Error(ErrorKind::dimension, "G is " + dims(g) + ", expected " + std::to_string(m) +
                                          "x" + std::to_string(b.rows()));
  }
  if ((u.size() == 0) != (v.size() == 0)) {
    throw Error(ErrorKind::invalid_argument, "null vectors u and v must both be present or absent");
  }
  if (u.size() == 0) return;
  if (u.size() != m || v.size() != n) {
    throw Error(ErrorKind::dimension, "null vector lengths do not match A and B");
  }
  if ((a * u).norm() > kNullTolerance * a.norm() * u.norm()) {
    throw Error(ErrorKind::invalid_argument, "u is not a null vector of A");
  }
  if ((b * v).norm() > kNullTolerance * b.norm() * v.norm()) {
    throw Error(ErrorKind::invalid_argument, "v is not a null vector of B");
  }
}

Matrix SylvesterSystem::left_coefficient() const { return gram(a); }
Matrix SylvesterSystem::right_coefficient() const { return gram(b); }
Matrix SylvesterSystem::rhs() const { return a.transpose() * f + g * b; }

double sylvester_cost(const SylvesterSystem& sys, const Matrix& phi) {
  return (sys.a * phi - sys.f).squaredNorm() + (phi * sys.b.transpose() - sys.g).squaredNorm();
}

Matrix sylvester_residual(const SylvesterSystem& sys, const Matrix& phi) {
  return sys.a.transpose() * (sys.a * phi) + (phi * sys.b.transpose()) * sys.b - sys.rhs();
}

Matrix solve_full_rank(const Matrix& p, const Matrix& q, const Matrix& c) {
  require_symmetric(p, "P");
  require_symmetric(q, "Q");
  if (c.rows() != p.rows() || c.cols() != q.rows()) {
    throw Error(ErrorKind::dimension, "C is " + dims(c) + " but P is " + dims(p) +
                                          " and Q is " + dims(q));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> ep(p);
  Eigen::SelfAdjointEigenSolver<Matrix> eq(q);
  if (ep.info() != Eigen::Success || eq.info() != Eigen::Success) {
    throw Error(ErrorKind::singular, "symmetric eigendecomposition did not converge");
  }
  const Vector& lp = ep.eigenvalues();
  const Vector& lq = eq.eigenvalues();
  const double tol = kPencilTolerance * (lp.cwiseAbs().maxCoeff() + lq.cwiseAbs().maxCoeff());
  const Matrix ct = ep.eigenvectors().transpose() * c * eq.eigenvectors();
  Matrix xt;
  if (!kernels::active::diagonal_sylvester(ct, lp, lq, tol, xt)) {
    throw Error(ErrorKind::singular,
                "Sylvester pencil is singular (an eigenvalue pair sums to zero)");
  }
  return ep.eigenvectors() * xt * eq.eigenvectors().transpose();
}

void Reflector::apply_left(Matrix& a) const {
  if (a.rows() != size()) throw Error(ErrorKind::dimension, "reflector size mismatch");
  kernels::active::reflect_left(a, w_);
}

void Reflector::apply_right(Matrix& a) const {
  if (a.cols() != size()) throw Error(ErrorKind::dimension, "reflector size mismatch");
  kernels::active::reflect_right(a, w_);
}

Vector Reflector::apply(const Vector& x) const {
  return x - (2.0 * w_.dot(x) / w_.squaredNorm()) * w_;
}

Matrix Reflector::materialize() const {
  return Matrix::Identity(size(), size()) - (2.0 / w_.squaredNorm()) * w_ * w_.transpose();
}

Reflector householder_vector(const Vector& u) {
  const double norm = u.norm();
  if (u.size() == 0 || !(norm > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "Householder vector of a zero vector");
  }
  Vector w = u;
  w(0) += (u(0) < 0.0 ? -norm : norm);
  return Reflector(std::move(w));
}

Matrix solve_deflated(const SylvesterSystem& sys) {
  sys.validate();
  if (!sys.has_null_space()) {
    throw Error(ErrorKind::invalid_argument, "solve_deflated needs null vectors u and v");
  }
  const Index m = sys.rows();
  const Index n = sys.cols();
  if (m < 2 || n < 2) throw Error(ErrorKind::dimension, "deflation needs at least a 2x2 grid");

  const Reflector pa = householder_vector(sys.u);
  const Reflector pb = householder_vector(sys.v);

  Matrix ahat = sys.a;
  pa.apply_right(ahat);
  Matrix bhat = sys.b;
  pb.apply_right(bhat);
  Matrix fhat = sys.f;
  pb.apply_right(fhat);
  Matrix ghat = sys.g;
  pa.apply_left(ghat);

  const Matrix r = ahat.rightCols(m - 1);
  const Matrix s = bhat.rightCols(n - 1);

  const Vector psi01 = least_squares(s, ghat.row(0).transpose(), "S");
  const Vector psi10 = least_squares(r, fhat.col(0), "R");
  const Matrix rhs11 = r.transpose() * fhat.rightCols(n - 1) + ghat.bottomRows(m - 1) * s;
  const Matrix psi11 = solve_full_rank(gram(r), gram(s), rhs11);

  Matrix psi(m, n);
  psi(0, 0) = 0.0;
  psi.row(0).tail(n - 1) = psi01.transpose();
  psi.col(0).tail(m - 1) = psi10;
  psi.bottomRightCorner(m - 1, n - 1) = psi11;

  pa.apply_left(psi);
  pb.apply_right(psi);
  return psi;
}

Matrix solve(const SylvesterSystem& sys) {
  if (sys.has_null_space()) return solve_deflated(sys);
  sys.validate();
  return solve_full_rank(sys.left_coefficient(), sys.right_coefficient(), sys.rhs());
}

SymmetricRoots sym_sqrt(const Matrix& m) {
  require_symmetric(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::singular, "symmetric eigendecomposition did not converge");
  }
  const Vector& ev = es.eigenvalues();
  const double largest = ev.maxCoeff();
  if (!(largest > 0.0) || ev.minCoeff() <= 1e-12 * largest) {
    throw Error(ErrorKind::invalid_argument, "matrix is not positive definite");
  }
  const Matrix& vecs = es.eigenvectors();
  SymmetricRoots out;
  out.root = vecs * ev.cwiseSqrt().asDiagonal() * vecs.transpose();
  out.inverse_root = vecs * ev.cwiseSqrt().cwiseInverse().asDiagonal() * vecs.transpose();
  out.root = 0.5 * (out.root + out.root.transpose()).eval();
  out.inverse_root = 0.5 * (out.inverse_root + out.inverse_root.transpose()).eval();
  return out;
}

double work_estimate(Index m, Index n, WorkModel model, int truncation_level) {
  if (m < 1 || n < 1) throw Error(ErrorKind::invalid_argument, "work_estimate needs m, n >= 1");
  auto hs = [](double mm, double nn) {
    return 5.0 / 3.0 * mm * mm * mm + 10.0 * nn * nn * nn + 5.0 * mm * mm * nn +
           2.5 * mm * nn * nn;
  };
  const auto md = static_cast<double>(m);
  const auto nd = static_cast<double>(n);
  switch (model) {
    case WorkModel::hessenberg_schur: return hs(md, nd);
    case WorkModel::vectorized: return 41.0 * md * md * md * nd * nd * nd;
    case WorkModel::spectral: {
      if (truncation_level < 0) {
        throw Error(ErrorKind::invalid_argument, "truncation level must be non-negative");
      }
      const double scale = std::ldexp(1.0, -truncation_level);
      return hs(md * scale, nd * scale);
    }
  }
  throw Error(ErrorKind::invalid_argument, "unknown work model");
}

}  // namespace gradsurf
