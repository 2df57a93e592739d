#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ocuflow {

// ============================================================================
// Compressed sparse row matrix with a fixed pattern and mutable values.
// Column indices are strictly increasing within each row, which makes entry
// lookup a binary search and keeps assembly scatter deterministic.
// ============================================================================
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return col_.size(); }

  const std::vector<int>& row_ptr() const { return ptr_; }
  const std::vector<int>& col_idx() const { return col_; }
  const std::vector<double>& values() const { return val_; }
  std::vector<double>& values() { return val_; }

  void set_zero();

  /// Adds v to entry (i, j). Throws if (i, j) is outside the pattern.
  void add(int i, int j, double v);
  /// Reads entry (i, j); zero if outside the pattern.
  double get(int i, int j) const;

  /// Replaces row i by zeros with `diag` on the diagonal (pattern permitting).
  void set_row_identity(int i, double diag = 1.0);
  /// Zeros every entry of row i.
  void zero_row(int i);

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x (serial column scatter)
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  /// Extracts the sub-matrix of rows [r0, r1) and columns [c0, c1).
  CsrMatrix extract_block(int r0, int r1, int c0, int c1) const;

  /// Dense copy, for small oracle comparisons.
  std::vector<double> to_dense() const;

private:
  int find(int i, int j) const; // value index or -1

  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

// Accumulates a sparsity pattern as sorted per-row column sets, then freezes
// it into a CsrMatrix with zeroed values.
class SparsityPattern {
public:
  SparsityPattern(int rows, int cols) : rows_(rows), cols_(cols), row_cols_(rows) {}

  void insert(int i, int j);
  void insert_clique(std::span<const int> rows, std::span<const int> cols);

  CsrMatrix build() const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

private:
  int rows_;
  int cols_;
  std::vector<std::vector<int>> row_cols_; // kept sorted and unique
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void scale(double alpha, std::span<double> x);

/// Writes the matrix in MatrixMarket coordinate format (1-based, general,
/// full round-trip precision).
void write_matrix_market(const CsrMatrix& a, const std::string& path);

} // namespace ocuflow
