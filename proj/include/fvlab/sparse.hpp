#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fvlab {

/// Square sparse matrix in CSR form over interior-node DOFs.
/// Column indices are sorted and unique within each row. Immutable once built.
struct SparseOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr;   // size rows+1
  std::vector<std::int32_t> col_idx;  // size nnz
  std::vector<double> values;         // size nnz
  bool volume_scaled = false;

  std::size_t nnz() const noexcept { return values.size(); }

  /// y = A x (kernel-dispatched CSR product).
  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  double value_at(std::size_t row, std::size_t col) const;  // 0 if not stored
  double max_abs_value() const;
};

/// Row-by-row builder; rows must be appended in order.
class SparseBuilder {
 public:
  SparseBuilder(std::size_t rows, std::size_t cols);
  /// Appends the next row from (col, value) pairs; sorts and merges duplicates.
  void add_row(std::vector<std::pair<std::int32_t, double>>& entries);
  SparseOperator finish(bool volume_scaled = false);

 private:
  SparseOperator op_;
};

/// max over stored positions of |A_ij - A_ji| / max|A|; a missing transpose
/// entry counts as zero. Returns 0 for an all-zero matrix.
double symmetry_defect(const SparseOperator& a);

/// MatrixMarket coordinate format, general real, 1-based indices.
void write_matrix_market(const SparseOperator& a, const std::string& path);

}  // namespace fvlab
