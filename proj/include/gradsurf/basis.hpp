#pragma once

#include "gradsurf/types.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace gradsurf {

enum class BasisFamily { cosine, gram, haar };

BasisFamily parse_basis_family(std::string_view name);
const char* to_string(BasisFamily family) noexcept;

/// Discrete orthonormal basis sampled on n uniform nodes. Column k holds the
/// basis function with index `indices()[k]` of the complete family, so a
/// column-sliced set still knows which functions it carries.
class BasisSet {
 public:
  BasisSet(BasisFamily family, Matrix entries, std::vector<Index> indices);

  BasisFamily family() const { return family_; }
  Index nodes() const { return entries_.rows(); }
  Index count() const { return entries_.cols(); }
  const Matrix& matrix() const { return entries_; }
  const std::vector<Index>& indices() const { return indices_; }

  /// True when the constant function (family index 0) is among the columns.
  bool has_constant() const;

  /// Keeps the given columns (positions into this set), in that order.
  BasisSet select(std::span<const Index> columns) const;

  /// Drops the columns whose family index appears in `family_indices`.
  BasisSet without(std::span<const Index> family_indices) const;

  /// Coefficients of f in this basis, B^T f.
  Vector expand(const Vector& f) const { return entries_.transpose() * f; }

 private:
  BasisFamily family_;
  Matrix entries_;
  std::vector<Index> indices_;
};

/// Orthonormal DCT-II functions c_k cos(pi k (2i+1) / 2n).
BasisSet cosine_basis(Index n, Index p);

/// Discrete orthonormal (Gram) polynomials of degree 0..p-1 on uniform nodes.
BasisSet gram_basis(Index n, Index p);

/// Normalized Haar system, constant first then wavelets coarse to fine.
/// n must be a power of two.
BasisSet haar_basis(Index n, Index p);

BasisSet make_basis(BasisFamily family, Index n, Index p);

}  // namespace gradsurf
