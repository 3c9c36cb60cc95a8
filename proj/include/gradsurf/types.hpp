#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gradsurf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Failure classes surfaced by the library. The CLI maps each one to a
/// distinct one-line diagnostic.
enum class ErrorKind {
  invalid_argument,
  dimension,
  singular,
  guard,
  io,
  format,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Height grid. Row index runs along y, column index along x.
struct Surface {
  Matrix heights;
  double hx = 1.0;
  double hy = 1.0;

  Index rows() const { return heights.rows(); }
  Index cols() const { return heights.cols(); }
};

/// Measured partial derivatives on the same grid as the surface.
struct GradientField {
  Matrix zx;
  Matrix zy;
  double hx = 1.0;
  double hy = 1.0;

  Index rows() const { return zx.rows(); }
  Index cols() const { return zx.cols(); }
};

/// Throws Error(dimension) unless zx and zy agree and Error(invalid_argument)
/// if any entry is non-finite or a spacing is not positive.
void validate(const GradientField& g);
void validate(const Surface& z);

/// Subtracts the grid mean.
Matrix mean_free(const Matrix& z);

}  // namespace gradsurf
