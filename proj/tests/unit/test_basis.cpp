#include "gradsurf/basis.hpp"

#include "../support.hpp"
#include "checks.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

using namespace gradsurf;
namespace ts = testing_support;

namespace {

double orthonormality_error(const BasisSet& b) {
  const Matrix g = b.matrix().transpose() * b.matrix();
  return ts::max_abs_diff(g, Matrix::Identity(b.count(), b.count()));
}

}  // namespace

TEST_SUITE("basis") {

TEST_CASE("cosine basis") {
  CHECK(orthonormality_error(cosine_basis(4, 4)) <= 1e-12);
  const BasisSet b = cosine_basis(9, 5);
  CHECK(b.nodes() == 9);
  CHECK(b.count() == 5);
  CHECK((b.matrix().col(0).array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-15);
  // explicit DCT-II samples
  for (Index i = 0; i < 9; ++i) {
    const double expect = std::sqrt(2.0 / 9.0) * std::cos(std::numbers::pi * 2.0 * (2 * i + 1) / 18.0);
    CHECK(b.matrix()(i, 2) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("cosine expansion concentrates on one index") {
  const BasisSet b = cosine_basis(8, 8);
  const Vector c = b.expand(b.matrix().col(3));
  for (Index k = 0; k < 8; ++k) CHECK(std::abs(c(k) - (k == 3 ? 1.0 : 0.0)) <= 1e-12);
}

TEST_CASE("gram basis") {
  CHECK(orthonormality_error(gram_basis(5, 3)) <= 1e-10);

  const BasisSet b = gram_basis(7, 4);
  CHECK((b.matrix().col(0).array() - 1.0 / std::sqrt(7.0)).abs().maxCoeff() <= 1e-14);
  // column 1 is an antisymmetric linear ramp
  const Vector c1 = b.matrix().col(1);
  for (Index i = 0; i < 7; ++i) CHECK(c1(i) == doctest::Approx(-c1(6 - i)).epsilon(1e-13));
  for (Index i = 1; i < 7; ++i) CHECK(c1(i) - c1(i - 1) == doctest::Approx(c1(1) - c1(0)));

  // x^2 lives in the first three functions
  const BasisSet full = gram_basis(6, 6);
  Vector f(6);
  for (Index i = 0; i < 6; ++i) f(i) = static_cast<double>(i * i);
  const Vector c = full.expand(f);
  CHECK(c.tail(3).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(c(2)) > 1e-3);
}

TEST_CASE("gram column k is orthogonal to lower-degree monomials") {
  for (Index n : {Index(10), Index(64), Index(1000)}) {
    const Index p = std::min<Index>(n, 12);
    const BasisSet b = gram_basis(n, p);
    CHECK(orthonormality_error(b) <= 1e-10);
    const Vector x = Vector::LinSpaced(n, -1.0, 1.0);
    for (Index k = 1; k < p; ++k) {
      for (int d = 0; d < k; ++d) {
        const Vector mono = x.array().pow(d).matrix();
        CHECK_MESSAGE(std::abs(b.matrix().col(k).dot(mono)) / mono.norm() <= 1e-9,
                      "n " << n << " k " << k << " degree " << d);
      }
    }
  }
}

TEST_CASE("haar basis") {
  const BasisSet b = haar_basis(4, 4);
  Matrix expect(4, 4);
  expect << 0.5, 0.5, std::sqrt(0.5), 0.0,
            0.5, 0.5, -std::sqrt(0.5), 0.0,
            0.5, -0.5, 0.0, std::sqrt(0.5),
            0.5, -0.5, 0.0, -std::sqrt(0.5);
  CHECK(ts::max_abs_diff(b.matrix(), expect) <= 1e-15);
  CHECK(orthonormality_error(haar_basis(32, 32)) <= 1e-12);

  // a step on the first half has no fine-scale content on the second half
  const BasisSet h = haar_basis(8, 8);
  Vector step = Vector::Zero(8);
  step.head(4).setOnes();
  const Vector c = h.expand(step);
  // functions 6 and 7 are the finest wavelets supported on nodes 4..7
  CHECK(std::abs(c(6)) <= 1e-15);
  CHECK(std::abs(c(7)) <= 1e-15);
  CHECK(std::abs(c(3)) <= 1e-15);
}

TEST_CASE("complete bases reproduce any vector") {
  std::mt19937_64 gen(21);
  for (BasisFamily f : {BasisFamily::cosine, BasisFamily::gram, BasisFamily::haar}) {
    const Index n = 16;
    const BasisSet b = make_basis(f, n, n);
    const Vector v = ts::random_matrix(n, 1, gen).col(0);
    CHECK((b.matrix() * b.expand(v) - v).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("truncation is the least-squares projection") {
  std::mt19937_64 gen(22);
  for (BasisFamily f : {BasisFamily::cosine, BasisFamily::gram, BasisFamily::haar}) {
    const BasisSet b = make_basis(f, 16, 6);
    const Vector v = ts::random_matrix(16, 1, gen).col(0);
    const Vector ls = b.matrix().colPivHouseholderQr().solve(v);
    CHECK((b.expand(v) - ls).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constant first in every family") {
  for (BasisFamily f : {BasisFamily::cosine, BasisFamily::gram, BasisFamily::haar}) {
    const BasisSet b = make_basis(f, 8, 3);
    CHECK(b.has_constant());
    CHECK((b.matrix().col(0).array() - 1.0 / std::sqrt(8.0)).abs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("slicing keeps family indices") {
  const BasisSet b = gram_basis(10, 6);
  const std::vector<Index> drop = {0, 1};
  const BasisSet band = b.without(drop);
  CHECK(band.count() == 4);
  CHECK_FALSE(band.has_constant());
  CHECK(band.indices() == std::vector<Index>{2, 3, 4, 5});
  CHECK(ts::max_abs_diff(band.matrix(), b.matrix().rightCols(4)) == 0.0);

  const std::vector<Index> cols = {3, 0};
  const BasisSet picked = b.select(cols);
  CHECK(picked.indices() == std::vector<Index>{3, 0});
  CHECK(picked.has_constant());
  CHECK(ts::max_abs_diff(picked.matrix().col(0), b.matrix().col(3)) == 0.0);
}

TEST_CASE("invalid arguments") {
  CHECK_ERROR_KIND(cosine_basis(4, 0), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(cosine_basis(4, 5), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(gram_basis(5, 6), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(haar_basis(6, 2), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(haar_basis(8, 9), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(parse_basis_family("fourier"), ErrorKind::invalid_argument);
  CHECK(parse_basis_family("haar") == BasisFamily::haar);
  const BasisSet b = cosine_basis(4, 2);
  const std::vector<Index> bad = {2};
  CHECK_ERROR_KIND(b.select(bad), ErrorKind::invalid_argument);
  const std::vector<Index> all = {0, 1};
  CHECK_ERROR_KIND(b.without(all), ErrorKind::invalid_argument);
}

}  // TEST_SUITE
