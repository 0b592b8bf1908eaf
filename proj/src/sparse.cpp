#include "fvlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fvlab/kernels.hpp"

namespace fvlab {

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols || y.size() != rows) {
    throw std::invalid_argument("SparseOperator::apply: size mismatch");
  }
  kernels::csr_spmv(rows, row_ptr.data(), col_idx.data(), values.data(), x.data(), y.data());
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
  std::vector<double> y(rows);
  apply(x, y);
  return y;
}

double SparseOperator::value_at(std::size_t row, std::size_t col) const {
  const auto begin = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row]);
  const auto end = col_idx.begin() + static_cast<std::ptrdiff_t>(row_ptr[row + 1]);
  const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(col));
  if (it == end || *it != static_cast<std::int32_t>(col)) return 0.0;
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

double SparseOperator::max_abs_value() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

SparseBuilder::SparseBuilder(std::size_t rows, std::size_t cols) {
  op_.rows = rows;
  op_.cols = cols;
  op_.row_ptr.reserve(rows + 1);
  op_.row_ptr.push_back(0);
}

void SparseBuilder::add_row(std::vector<std::pair<std::int32_t, double>>& entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t row_start = op_.col_idx.size();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (op_.col_idx.size() > row_start && entries[k].first == op_.col_idx.back()) {
      op_.values.back() += entries[k].second;
    } else {
      op_.col_idx.push_back(entries[k].first);
      op_.values.push_back(entries[k].second);
    }
  }
  op_.row_ptr.push_back(op_.col_idx.size());
}

SparseOperator SparseBuilder::finish(bool volume_scaled) {
  if (op_.row_ptr.size() != op_.rows + 1) {
    throw std::logic_error("SparseBuilder: not all rows appended");
  }
  op_.volume_scaled = volume_scaled;
  return std::move(op_);
}

double symmetry_defect(const SparseOperator& a) {
  if (a.rows != a.cols) throw std::invalid_argument("symmetry_defect: matrix must be square");
  const double scale = a.max_abs_value();
  if (scale == 0.0) return 0.0;
  double defect = 0.0;
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      const auto c = static_cast<std::size_t>(a.col_idx[k]);
      defect = std::max(defect, std::abs(a.values[k] - a.value_at(c, r)));
    }
  }
  return defect / scale;
}

void write_matrix_market(const SparseOperator& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows << " " << a.cols << " " << a.nnz() << "\n";
  char buf[64];
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", a.values[k]);
      out << (r + 1) << " " << (a.col_idx[k] + 1) << " " << buf << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace fvlab
