#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hypolab/field.hpp"

namespace hypolab {

/// Raw binary array: one little-endian uint64 per dimension, followed by the
/// row-major doubles. A density field is written with dims (n_x, n_x, n_theta).
struct RawArray {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;
};

void write_raw(const std::filesystem::path& path, std::span<const std::uint64_t> dims,
               std::span<const double> values);
RawArray read_raw(const std::filesystem::path& path, std::size_t rank);

void write_density(const std::filesystem::path& path, const DensityField& f);
DensityField read_density(const std::filesystem::path& path);

/// Reads an n × n matrix from a raw binary file (rank 2) or, for a .csv
/// extension, from comma/whitespace separated text rows.
std::vector<double> read_matrix(const std::filesystem::path& path, std::size_t n);

void write_matrix_csv(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t rows, std::size_t cols);

}  // namespace hypolab
