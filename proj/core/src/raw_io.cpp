#include "hypolab/raw_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "hypolab/errors.hpp"

namespace hypolab {

static_assert(std::endian::native == std::endian::little,
              "raw field I/O assumes a little-endian host");

void write_raw(const std::filesystem::path& path, std::span<const std::uint64_t> dims,
               std::span<const double> values) {
  std::uint64_t expected = 1;
  for (auto d : dims) expected *= d;
  if (expected != values.size()) throw std::invalid_argument("raw array dims do not match data");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(dims.data()),
            static_cast<std::streamsize>(dims.size_bytes()));
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size_bytes()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

RawArray read_raw(const std::filesystem::path& path, std::size_t rank) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  RawArray a;
  a.dims.resize(rank);
  in.read(reinterpret_cast<char*>(a.dims.data()), static_cast<std::streamsize>(rank * 8));
  if (!in) throw IoError("truncated header in '" + path.string() + "'");
  std::uint64_t count = 1;
  for (auto d : a.dims) count *= d;
  if (count > (std::uint64_t{1} << 34)) throw IoError("implausible dims in '" + path.string() + "'");
  a.values.resize(count);
  in.read(reinterpret_cast<char*>(a.values.data()), static_cast<std::streamsize>(count * 8));
  if (!in) throw IoError("truncated data in '" + path.string() + "'");
  return a;
}

void write_density(const std::filesystem::path& path, const DensityField& f) {
  const std::uint64_t dims[3] = {static_cast<std::uint64_t>(f.grid().n_x()),
                                 static_cast<std::uint64_t>(f.grid().n_x()),
                                 static_cast<std::uint64_t>(f.grid().n_theta())};
  write_raw(path, dims, f.values());
}

DensityField read_density(const std::filesystem::path& path) {
  RawArray a = read_raw(path, 3);
  if (a.dims[0] != a.dims[1]) throw IoError("density field must be square in space");
  GridSpec grid(static_cast<int>(a.dims[0]), static_cast<int>(a.dims[2]));
  return DensityField(grid, std::move(a.values));
}

std::vector<double> read_matrix(const std::filesystem::path& path, std::size_t n) {
  std::vector<double> out;
  if (path.extension() == ".csv") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    while (std::getline(in, line)) {
      for (char& c : line)
        if (c == ',' || c == ';' || c == '\t') c = ' ';
      std::istringstream row(line);
      double v;
      while (row >> v) out.push_back(v);
      if (!row.eof()) throw IoError("non-numeric entry in '" + path.string() + "'");
    }
  } else {
    RawArray a = read_raw(path, 2);
    if (a.dims[0] != n || a.dims[1] != n)
      throw IoError("matrix in '" + path.string() + "' is not " + std::to_string(n) + "x" +
                    std::to_string(n));
    out = std::move(a.values);
  }
  if (out.size() != n * n)
    throw IoError("matrix in '" + path.string() + "' has " + std::to_string(out.size()) +
                  " entries, expected " + std::to_string(n * n));
  return out;
}

void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) throw std::invalid_argument("matrix shape mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", values[r * cols + c]);
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace hypolab
