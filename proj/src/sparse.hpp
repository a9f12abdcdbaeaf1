#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vesicle {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Row-compressed sparse matrix. Finalized matrices have sorted, duplicate-free
// column indices per row and are immutable through the public interface.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  // Duplicates are summed. The result depends only on the triplet multiset:
  // ties are ordered by the bit pattern of the value, so any permutation of
  // the input stream produces a bitwise-identical matrix.
  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  void multiply(std::span<const double> x, std::span<double> y) const;  // y = A x
  double coeff(int row, int col) const;  // 0 if not stored

  // Debug dump in MatrixMarket coordinate format (1-based, general).
  void write_matrix_market(const std::string& path) const;
  static SparseMatrix read_matrix_market(const std::string& path);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;

  friend class PatternCache;
};

// Reusable assembly for systems whose sparsity pattern is fixed across time
// steps while coefficients change. The first fill() records the emission
// pattern and builds the CSR structure; later fills only rewrite values, in
// the same deterministic order. The emitting callback must produce the same
// (row, col) sequence on every call.
class PatternCache {
 public:
  // emit(add) must call add(row, col, value) for every contribution.
  template <class EmitFn>
  SparseMatrix& fill(int rows, int cols, EmitFn&& emit) {
    if (!built_) {
      std::vector<Triplet> triplets;
      emit([&](int r, int c, double v) { triplets.push_back({r, c, v}); });
      build(rows, cols, triplets);
      return matrix_;
    }
    std::fill(matrix_.values_.begin(), matrix_.values_.end(), 0.0);
    std::size_t k = 0;
    emit([&](int, int, double v) { matrix_.values_[slot_[k++]] += v; });
    return matrix_;
  }

  bool built() const { return built_; }
  const SparseMatrix& matrix() const { return matrix_; }

 private:
  void build(int rows, int cols, const std::vector<Triplet>& triplets);

  bool built_ = false;
  std::vector<std::int32_t> slot_;  // emission index -> value slot
  SparseMatrix matrix_;
};

double norm2(std::span<const double> v);

}  // namespace vesicle
