#include "sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "common.hpp"

namespace vesicle {

namespace {

void check_indices(int rows, int cols, std::span<const Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw ValidationError(format_string("sparse assemble: index (%d, %d) out of range for %d x %d",
                                          t.row, t.col, rows, cols));
  }
}

bool triplet_order(const Triplet& a, const Triplet& b) {
  if (a.row != b.row) return a.row < b.row;
  if (a.col != b.col) return a.col < b.col;
  return std::bit_cast<std::uint64_t>(a.value) < std::bit_cast<std::uint64_t>(b.value);
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
  check_indices(rows, cols, triplets);
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  std::sort(sorted.begin(), sorted.end(), triplet_order);

  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(sorted.size());
  m.values_.reserve(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    const int r = sorted[i].row, c = sorted[i].col;
    double sum = 0.0;
    for (; i < sorted.size() && sorted[i].row == r && sorted[i].col == c; ++i) sum += sorted[i].value;
    m.row_ptr_[r + 1]++;
    m.col_idx_.push_back(c);
    m.values_.push_back(sum);
  }
  for (int r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
    y[r] = acc;
  }
}

double SparseMatrix::coeff(int row, int col) const {
  for (int k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (col_idx_[k] == col) return values_[k];
  return 0.0;
}

void SparseMatrix::write_matrix_market(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open for writing: " + path);
  std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
  std::fprintf(f, "%d %d %lld\n", rows_, cols_, static_cast<long long>(nnz()));
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      std::fprintf(f, "%d %d %.17e\n", r + 1, col_idx_[k] + 1, values_[k]);
  std::fclose(f);
}

SparseMatrix SparseMatrix::read_matrix_market(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "r");
  if (!f) throw IoError("cannot open for reading: " + path);
  char header[256];
  if (!std::fgets(header, sizeof header, f)) {
    std::fclose(f);
    throw IoError("empty MatrixMarket file: " + path);
  }
  int rows = 0, cols = 0;
  long long entries = 0;
  if (std::fscanf(f, "%d %d %lld", &rows, &cols, &entries) != 3) {
    std::fclose(f);
    throw IoError("malformed MatrixMarket header: " + path);
  }
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(entries));
  for (long long i = 0; i < entries; ++i) {
    int r = 0, c = 0;
    double v = 0.0;
    if (std::fscanf(f, "%d %d %lf", &r, &c, &v) != 3) {
      std::fclose(f);
      throw IoError("truncated MatrixMarket file: " + path);
    }
    triplets.push_back({r - 1, c - 1, v});
  }
  std::fclose(f);
  return from_triplets(rows, cols, triplets);
}

void PatternCache::build(int rows, int cols, const std::vector<Triplet>& triplets) {
  check_indices(rows, cols, triplets);
  // Sort emission indices by (row, col); ties keep emission order so that the
  // accumulation order is reproducible run to run.
  std::vector<std::int64_t> order(triplets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    const Triplet& ta = triplets[a];
    const Triplet& tb = triplets[b];
    if (ta.row != tb.row) return ta.row < tb.row;
    if (ta.col != tb.col) return ta.col < tb.col;
    return a < b;
  });

  matrix_ = SparseMatrix(rows, cols);
  slot_.assign(triplets.size(), 0);
  int last_row = -1, last_col = -1;
  for (std::int64_t idx : order) {
    const Triplet& t = triplets[idx];
    if (t.row != last_row || t.col != last_col) {
      matrix_.row_ptr_[t.row + 1]++;
      matrix_.col_idx_.push_back(t.col);
      matrix_.values_.push_back(0.0);
      last_row = t.row;
      last_col = t.col;
    }
    slot_[idx] = static_cast<std::int32_t>(matrix_.values_.size() - 1);
  }
  for (int r = 0; r < rows; ++r) matrix_.row_ptr_[r + 1] += matrix_.row_ptr_[r];
  for (std::size_t k = 0; k < triplets.size(); ++k) matrix_.values_[slot_[k]] += triplets[k].value;
  built_ = true;
}

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace vesicle
