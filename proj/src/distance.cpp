#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "covbal/error.hpp"
#include "covbal/graphs.hpp"
#include "covbal/parallel.hpp"
#include "covbal/simd/kernels.hpp"

namespace covbal {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> entries, Metric metric,
                               double symmetry_tol)
    : n_(n), d_(std::move(entries)), metric_(metric) {
  if (d_.size() != n_ * n_) throw DataError("distance matrix is not square");
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i * n_ + i] != 0.0) {
      throw DataError("distance matrix: non-zero diagonal at row " + std::to_string(i + 1));
    }
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double a = d_[i * n_ + j];
      const double b = d_[j * n_ + i];
      if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        throw DataError("distance matrix: entry (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + ") is negative or not finite");
      }
      if (std::abs(a - b) > symmetry_tol) {
        throw DataError("distance matrix: not symmetric at (" + std::to_string(i + 1) + ", " +
                        std::to_string(j + 1) + ")");
      }
      d_[j * n_ + i] = a;
    }
  }
}

DistanceMatrix pairwise_distances(const Dataset& d, const DistanceOptions& options) {
  const std::size_t n = d.size();
  const std::size_t dim = d.dim();

  // Column-major copy so the kernel streams contiguous target rows.
  std::vector<double> columns(n * dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double shift = 0.0;
    double scale = 1.0;
    if (options.standardize) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += d(i, k);
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (d(i, k) - mean) * (d(i, k) - mean);
      const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
      shift = mean;
      scale = sd > 0.0 ? 1.0 / sd : 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) columns[k * n + i] = (d(i, k) - shift) * scale;
  }

  const simd::KernelTable& kernels = simd::active_kernels();
  std::vector<double> out(n * n, 0.0);
  parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> point(dim);
    for (std::size_t i = begin; i < end; ++i) {
      if (i + 1 >= n) continue;
      for (std::size_t k = 0; k < dim; ++k) point[k] = columns[k * n + i];
      double* row = out.data() + i * n + i + 1;
      kernels.squared_distances(point, columns.data() + i + 1, n, n - i - 1, row);
      for (std::size_t j = 0; j < n - i - 1; ++j) row[j] = std::sqrt(row[j]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out[j * n + i] = out[i * n + j];
  }
  return DistanceMatrix(DistanceMatrix::Unchecked{}, n, std::move(out), Metric::Euclidean);
}

DistanceMatrix read_distance_csv(std::istream& in, std::size_t expected_n) {
  std::vector<double> entries;
  std::size_t rows = 0;
  std::size_t width = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_record(line);
    if (rows == 0) width = fields.size();
    ++rows;
    if (fields.size() != width) {
      throw DataError("distance csv: row " + std::to_string(rows) + " has " +
                      std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(fields[j], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != fields[j].size() || !std::isfinite(v)) {
        throw DataError("distance csv: row " + std::to_string(rows) + ", column " +
                        std::to_string(j + 1) + ": expected a finite number, got '" + fields[j] +
                        "'");
      }
      entries.push_back(v);
    }
  }
  if (rows != width) {
    throw DataError("distance csv: " + std::to_string(rows) + " rows x " + std::to_string(width) +
                    " columns is not square");
  }
  if (expected_n != 0 && rows != expected_n) {
    throw DataError("distance csv: matrix is " + std::to_string(rows) + " x " +
                    std::to_string(rows) + " but the dataset has " + std::to_string(expected_n) +
                    " rows");
  }
  return DistanceMatrix(rows, std::move(entries), Metric::Precomputed);
}

DistanceMatrix load_distance_csv(const std::filesystem::path& path, std::size_t expected_n) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_distance_csv(in, expected_n);
}

}  // namespace covbal
