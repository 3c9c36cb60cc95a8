#include "gradsurf/types.hpp"

#include <cmath>

namespace gradsurf {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::dimension: return "dimension mismatch";
    case ErrorKind::singular: return "singular system";
    case ErrorKind::guard: return "size guard";
    case ErrorKind::io: return "i/o error";
    case ErrorKind::format: return "format error";
  }
  return "error";
}

void validate(const GradientField& g) {
  if (g.zx.rows() != g.zy.rows() || g.zx.cols() != g.zy.cols()) {
    throw Error(ErrorKind::dimension, "gradient components have different sizes");
  }
  if (!(g.hx > 0.0) || !(g.hy > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "grid spacing must be positive");
  }
  if (!g.zx.allFinite() || !g.zy.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "gradient contains non-finite values");
  }
}

void validate(const Surface& z) {
  if (!(z.hx > 0.0) || !(z.hy > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "grid spacing must be positive");
  }
  if (!z.heights.allFinite()) {
    throw Error(ErrorKind::invalid_argument, "surface contains non-finite values");
  }
}

Matrix mean_free(const Matrix& z) {
  if (z.size() == 0) return z;
  return z.array() - z.mean();
}

}  // namespace gradsurf
