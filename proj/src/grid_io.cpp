#include "gradsurf/grid_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <vector>

#include <unistd.h>

namespace gradsurf {

namespace {

constexpr std::array<char, 4> kMagic = {'G', '2', 'S', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8;

std::uint64_t load_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int k = bytes - 1; k >= 0; --k) v = (v << 8) | p[k];
  return v;
}

void store_le(std::string& out, std::uint64_t v, int bytes) {
  for (int k = 0; k < bytes; ++k) {
    out.push_back(static_cast<char>(v & 0xffu));
    v >>= 8;
  }
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::io, "read error on '" + path + "'");
  return data;
}

void check_grid(const Grid& grid) {
  if (grid.values.rows() < 1 || grid.values.cols() < 1) {
    throw Error(ErrorKind::invalid_argument, "grid is empty");
  }
  if (!grid.values.allFinite()) throw Error(ErrorKind::invalid_argument, "grid has non-finite values");
}

}  // namespace

// Write next to the target and rename so a failed run never leaves a
// half-written file under the final name.
void write_file_atomic(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::io, "write error on '" + path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorKind::io, "cannot move output into place at '" + path + "': " + ec.message());
  }
}

GridFormat format_for_path(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  std::string lower(ext.size(), '\0');
  std::transform(ext.begin(), ext.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == ".csv" ? GridFormat::csv : GridFormat::binary;
}

Grid read_grid_binary(const std::string& path) {
  const std::string data = read_all(path);
  if (data.size() < kHeaderBytes) {
    throw Error(ErrorKind::format, "'" + path + "': truncated header");
  }
  if (std::memcmp(data.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::format, "'" + path + "': bad magic, expected G2S1");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  const std::uint64_t m = load_le(p + 4, 4);
  const std::uint64_t n = load_le(p + 8, 4);
  const double hx = std::bit_cast<double>(load_le(p + 12, 8));
  const double hy = std::bit_cast<double>(load_le(p + 20, 8));
  if (m == 0 || n == 0) throw Error(ErrorKind::format, "'" + path + "': zero grid dimension");
  // m, n < 2^32, so m*n < 2^64; the byte count is what may overflow
  const std::uint64_t count = m * n;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kHeaderBytes) / 8 ||
      count > static_cast<std::uint64_t>(std::numeric_limits<Index>::max())) {
    throw Error(ErrorKind::format, "'" + path + "': dimensions overflow");
  }
  const std::uint64_t expected = kHeaderBytes + 8 * count;
  if (data.size() < expected) {
    throw Error(ErrorKind::format, "'" + path + "': truncated payload, header says " +
                                       std::to_string(m) + "x" + std::to_string(n) + " but only " +
                                       std::to_string((data.size() - kHeaderBytes) / 8) +
                                       " values present");
  }
  if (data.size() > expected) {
    throw Error(ErrorKind::format, "'" + path + "': trailing bytes after payload");
  }
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) {
    throw Error(ErrorKind::format, "'" + path + "': spacings must be finite and positive");
  }
  Grid g;
  g.hx = hx;
  g.hy = hy;
  g.values.resize(static_cast<Index>(m), static_cast<Index>(n));
  const unsigned char* v = p + kHeaderBytes;
  for (Index i = 0; i < g.values.rows(); ++i) {
    for (Index j = 0; j < g.values.cols(); ++j) {
      const double x = std::bit_cast<double>(load_le(v, 8));
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::format, "'" + path + "': non-finite value at row " +
                                           std::to_string(i) + ", column " + std::to_string(j));
      }
      g.values(i, j) = x;
      v += 8;
    }
  }
  return g;
}

void write_grid_binary(const std::string& path, const Grid& grid) {
  check_grid(grid);
  const auto m = static_cast<std::uint64_t>(grid.values.rows());
  const auto n = static_cast<std::uint64_t>(grid.values.cols());
  if (m > 0xffffffffu || n > 0xffffffffu) {
    throw Error(ErrorKind::invalid_argument, "grid too large for the binary format");
  }
  std::string out;
  out.reserve(kHeaderBytes + 8 * m * n);
  out.append(kMagic.data(), kMagic.size());
  store_le(out, m, 4);
  store_le(out, n, 4);
  store_le(out, std::bit_cast<std::uint64_t>(grid.hx), 8);
  store_le(out, std::bit_cast<std::uint64_t>(grid.hy), 8);
  for (Index i = 0; i < grid.values.rows(); ++i) {
    for (Index j = 0; j < grid.values.cols(); ++j) {
      store_le(out, std::bit_cast<std::uint64_t>(grid.values(i, j)), 8);
    }
  }
  write_file_atomic(path, out);
}

Grid read_grid_csv(const std::string& path, double hx, double hy) {
  const std::string data = read_all(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::istringstream lines(data);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t count = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p < end && *p == '+') ++p;
      double x = 0.0;
      auto [next, ec] = std::from_chars(p, end, x);
      if (ec != std::errc{}) {
        throw Error(ErrorKind::format, "'" + path + "': row " + std::to_string(rows + 1) +
                                           " (line " + std::to_string(line_no) +
                                           "): cannot parse a number");
      }
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::format, "'" + path + "': row " + std::to_string(rows + 1) +
                                           " has a non-finite value");
      }
      values.push_back(x);
      ++count;
      p = next;
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      if (*p != ',') {
        throw Error(ErrorKind::format, "'" + path + "': row " + std::to_string(rows + 1) +
                                           " (line " + std::to_string(line_no) +
                                           "): unexpected character");
      }
      ++p;
    }
    ++rows;
    if (rows == 1) {
      cols = count;
    } else if (count != cols) {
      throw Error(ErrorKind::format, "'" + path + "': ragged row " + std::to_string(rows) +
                                         " has " + std::to_string(count) + " values, expected " +
                                         std::to_string(cols));
    }
  }
  if (rows == 0) throw Error(ErrorKind::format, "'" + path + "': no data rows");
  if (!(hx > 0.0) || !(hy > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "grid spacing must be positive");
  }
  Grid g;
  g.hx = hx;
  g.hy = hy;
  g.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Index>(rows), static_cast<Index>(cols));
  return g;
}

void write_grid_csv(const std::string& path, const Grid& grid) {
  check_grid(grid);
  std::string out;
  std::array<char, 32> buf{};
  for (Index i = 0; i < grid.values.rows(); ++i) {
    for (Index j = 0; j < grid.values.cols(); ++j) {
      if (j > 0) out.push_back(',');
      // shortest representation that reads back to the same double
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), grid.values(i, j));
      (void)ec;
      out.append(buf.data(), ptr);
    }
    out.push_back('\n');
  }
  write_file_atomic(path, out);
}

Grid read_grid(const std::string& path, double hx, double hy) {
  return format_for_path(path) == GridFormat::csv ? read_grid_csv(path, hx, hy)
                                                  : read_grid_binary(path);
}

void write_grid(const std::string& path, const Grid& grid) {
  if (format_for_path(path) == GridFormat::csv) {
    write_grid_csv(path, grid);
  } else {
    write_grid_binary(path, grid);
  }
}

}  // namespace gradsurf
