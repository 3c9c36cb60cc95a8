#pragma once

#include "gradsurf/types.hpp"

#include <string>

namespace gradsurf {

/// A height or gradient component grid with its node spacings.
struct Grid {
  Matrix values;
  double hx = 1.0;
  double hy = 1.0;
};

enum class GridFormat { binary, csv };

/// ".csv" (any case) selects CSV, everything else the binary format.
GridFormat format_for_path(const std::string& path);

/// Binary layout: "G2S1", u32 rows, u32 cols, f64 hx, f64 hy, then
/// rows*cols f64 values row-major. All little-endian.
Grid read_grid_binary(const std::string& path);
void write_grid_binary(const std::string& path, const Grid& grid);

/// Plain comma-separated numeric rows; spacings are not stored and come
/// from the caller.
Grid read_grid_csv(const std::string& path, double hx = 1.0, double hy = 1.0);
void write_grid_csv(const std::string& path, const Grid& grid);

/// Dispatch on format_for_path. For CSV input hx/hy are taken from the
/// arguments; binary input ignores them.
Grid read_grid(const std::string& path, double hx = 1.0, double hy = 1.0);
void write_grid(const std::string& path, const Grid& grid);

/// Writes `data` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& data);

}  // namespace gradsurf
