#include "gradsurf/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gradsurf {

namespace {

void check_count(Index n, Index p) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "basis needs at least one node");
  if (p < 1 || p > n) {
    throw Error(ErrorKind::invalid_argument, "basis count p=" + std::to_string(p) +
                                                 " out of range [1, " + std::to_string(n) + "]");
  }
}

std::vector<Index> iota_indices(Index p) {
  std::vector<Index> idx(static_cast<std::size_t>(p));
  for (Index k = 0; k < p; ++k) idx[static_cast<std::size_t>(k)] = k;
  return idx;
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr double kReorthTolerance = 1e-11;

}  // namespace

BasisFamily parse_basis_family(std::string_view name) {
  if (name == "cosine" || name == "dct") return BasisFamily::cosine;
  if (name == "gram") return BasisFamily::gram;
  if (name == "haar") return BasisFamily::haar;
  throw Error(ErrorKind::invalid_argument, "unknown basis family '" + std::string(name) + "'");
}

const char* to_string(BasisFamily family) noexcept {
  switch (family) {
    case BasisFamily::cosine: return "cosine";
    case BasisFamily::gram: return "gram";
    case BasisFamily::haar: return "haar";
  }
  return "?";
}

BasisSet::BasisSet(BasisFamily family, Matrix entries, std::vector<Index> indices)
    : family_(family), entries_(std::move(entries)), indices_(std::move(indices)) {
  if (static_cast<Index>(indices_.size()) != entries_.cols()) {
    throw Error(ErrorKind::dimension, "basis index list does not match column count");
  }
}

bool BasisSet::has_constant() const {
  return std::find(indices_.begin(), indices_.end(), Index{0}) != indices_.end();
}

BasisSet BasisSet::select(std::span<const Index> columns) const {
  if (columns.empty()) throw Error(ErrorKind::invalid_argument, "empty basis column selection");
  Matrix out(entries_.rows(), static_cast<Index>(columns.size()));
  std::vector<Index> idx;
  idx.reserve(columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const Index c = columns[k];
    if (c < 0 || c >= count()) {
      throw Error(ErrorKind::invalid_argument, "basis column " + std::to_string(c) + " out of range");
    }
    out.col(static_cast<Index>(k)) = entries_.col(c);
    idx.push_back(indices_[static_cast<std::size_t>(c)]);
  }
  return BasisSet(family_, std::move(out), std::move(idx));
}

BasisSet BasisSet::without(std::span<const Index> family_indices) const {
  std::vector<Index> keep;
  for (Index c = 0; c < count(); ++c) {
    const Index fi = indices_[static_cast<std::size_t>(c)];
    if (std::find(family_indices.begin(), family_indices.end(), fi) == family_indices.end()) {
      keep.push_back(c);
    }
  }
  return select(keep);
}

BasisSet cosine_basis(Index n, Index p) {
  check_count(n, p);
  Matrix b(n, p);
  const double c0 = 1.0 / std::sqrt(static_cast<double>(n));
  const double ck = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < p; ++k) {
    for (Index i = 0; i < n; ++i) {
      b(i, k) = k == 0 ? c0
                       : ck * std::cos(std::numbers::pi * static_cast<double>(k) *
                                       static_cast<double>(2 * i + 1) /
                                       (2.0 * static_cast<double>(n)));
    }
  }
  return BasisSet(BasisFamily::cosine, std::move(b), iota_indices(p));
}

// Stieltjes three-term recurrence on the nodes x_i in [-1, 1]. Each new
// column is renormalized; if it has drifted from the previous columns by
// more than kReorthTolerance it gets one Gram-Schmidt pass against them
// (which keeps it inside the span of polynomials of its degree).
BasisSet gram_basis(Index n, Index p) {
  check_count(n, p);
  Matrix b = Matrix::Zero(n, p);
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x(i) = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  b.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  double beta_prev = 0.0;
  for (Index k = 0; k + 1 < p; ++k) {
    Vector next = x.cwiseProduct(b.col(k));
    const double alpha = b.col(k).dot(next);
    next -= alpha * b.col(k);
    if (k > 0) next -= beta_prev * b.col(k - 1);
    double beta = next.norm();
    next /= beta;
    const double drift = (b.leftCols(k + 1).transpose() * next).cwiseAbs().maxCoeff();
    if (drift > kReorthTolerance) {
      for (int pass = 0; pass < 2; ++pass) {
        next -= b.leftCols(k + 1) * (b.leftCols(k + 1).transpose() * next);
        next.normalize();
      }
    }
    b.col(k + 1) = next;
    beta_prev = beta;
  }
  // Fix the sign so that every column has a positive leading coefficient,
  // i.e. it ends positive at the right node.
  for (Index k = 0; k < p; ++k) {
    if (b(n - 1, k) < 0.0) b.col(k) *= -1.0;
  }
  return BasisSet(BasisFamily::gram, std::move(b), iota_indices(p));
}

BasisSet haar_basis(Index n, Index p) {
  if (!is_power_of_two(n)) {
    throw Error(ErrorKind::invalid_argument,
                "Haar basis needs a power-of-two node count, got " + std::to_string(n));
  }
  check_count(n, p);
  Matrix b = Matrix::Zero(n, p);
  b.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  Index col = 1;
  for (Index blocks = 1; blocks < n && col < p; blocks *= 2) {
    const Index len = n / blocks;
    const double v = 1.0 / std::sqrt(static_cast<double>(len));
    for (Index k = 0; k < blocks && col < p; ++k, ++col) {
      const Index start = k * len;
      b.col(col).segment(start, len / 2).setConstant(v);
      b.col(col).segment(start + len / 2, len / 2).setConstant(-v);
    }
  }
  return BasisSet(BasisFamily::haar, std::move(b), iota_indices(p));
}

BasisSet make_basis(BasisFamily family, Index n, Index p) {
  switch (family) {
    case BasisFamily::cosine: return cosine_basis(n, p);
    case BasisFamily::gram: return gram_basis(n, p);
    case BasisFamily::haar: return haar_basis(n, p);
  }
  throw Error(ErrorKind::invalid_argument, "unknown basis family");
}

}  // namespace gradsurf
