#include "ocuflow/csr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ocuflow/parallel.hpp"

namespace ocuflow {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx)
    : rows_(rows), cols_(cols), ptr_(std::move(row_ptr)), col_(std::move(col_idx)) {
  if ((int)ptr_.size() != rows_ + 1) throw std::runtime_error("csr: row_ptr size mismatch");
  for (int i = 0; i < rows_; ++i) {
    for (int k = ptr_[i] + 1; k < ptr_[i + 1]; ++k)
      if (col_[k - 1] >= col_[k]) throw std::runtime_error("csr: columns not strictly increasing");
  }
  val_.assign(col_.size(), 0.0);
}

void CsrMatrix::set_zero() { std::fill(val_.begin(), val_.end(), 0.0); }

int CsrMatrix::find(int i, int j) const {
  const int* first = col_.data() + ptr_[i];
  const int* last = col_.data() + ptr_[i + 1];
  const int* it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return (int)(it - col_.data());
}

void CsrMatrix::add(int i, int j, double v) {
  const int k = find(i, j);
  if (k < 0) throw std::runtime_error("csr: entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside pattern");
  val_[k] += v;
}

double CsrMatrix::get(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : val_[k];
}

void CsrMatrix::set_row_identity(int i, double diag) {
  for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) val_[k] = 0.0;
  const int k = find(i, i);
  if (k < 0) throw std::runtime_error("csr: diagonal missing in row " + std::to_string(i));
  val_[k] = diag;
}

void CsrMatrix::zero_row(int i) {
  for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) val_[k] = 0.0;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  // Row-parallel: each output slot is written by exactly one worker, so the
  // result is bitwise independent of the thread count.
  parallel_chunks(rows_, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
      y[i] = s;
    }
  });
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) y[col_[k]] += val_[k] * x[i];
}

CsrMatrix CsrMatrix::extract_block(int r0, int r1, int c0, int c1) const {
  std::vector<int> ptr(r1 - r0 + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  for (int i = r0; i < r1; ++i) {
    for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) {
      if (col_[k] >= c0 && col_[k] < c1) {
        col.push_back(col_[k] - c0);
        val.push_back(val_[k]);
      }
    }
    ptr[i - r0 + 1] = (int)col.size();
  }
  CsrMatrix out(r1 - r0, c1 - c0, std::move(ptr), std::move(col));
  out.values() = std::move(val);
  return out;
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> d((std::size_t)rows_ * cols_, 0.0);
  for (int i = 0; i < rows_; ++i)
    for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) d[(std::size_t)i * cols_ + col_[k]] = val_[k];
  return d;
}

void SparsityPattern::insert(int i, int j) {
  auto& r = row_cols_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j);
  if (it == r.end() || *it != j) r.insert(it, j);
}

void SparsityPattern::insert_clique(std::span<const int> rows, std::span<const int> cols) {
  for (int i : rows)
    for (int j : cols) insert(i, j);
}

CsrMatrix SparsityPattern::build() const {
  std::vector<int> ptr(rows_ + 1, 0);
  std::size_t nnz = 0;
  for (int i = 0; i < rows_; ++i) {
    nnz += row_cols_[i].size();
    ptr[i + 1] = (int)nnz;
  }
  std::vector<int> col;
  col.reserve(nnz);
  for (const auto& r : row_cols_) col.insert(col.end(), r.begin(), r.end());
  return CsrMatrix(rows_, cols_, std::move(ptr), std::move(col));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
  for (auto& v : x) v *= alpha;
}

void write_matrix_market(const CsrMatrix& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  const auto& ptr = a.row_ptr();
  const auto& col = a.col_idx();
  const auto& val = a.values();
  char buf[40];
  for (int i = 0; i < a.rows(); ++i)
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) {
      auto res = std::to_chars(buf, buf + sizeof(buf), val[k]);
      out << (i + 1) << " " << (col[k] + 1) << " ";
      out.write(buf, res.ptr - buf);
      out << "\n";
    }
  if (!out)
    throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace ocuflow
