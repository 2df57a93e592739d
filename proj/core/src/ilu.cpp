#include "ocuflow/ilu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ocuflow {

Ilu0::Ilu0(const CsrMatrix& a) : f_(a) {
  if (a.rows() != a.cols()) throw std::runtime_error("ilu0: matrix not square");
  const auto& ptr = f_.row_ptr();
  const auto& col = f_.col_idx();
  auto& val = f_.values();
  const int n = f_.rows();

  diag_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = ptr[i]; k < ptr[i + 1]; ++k)
      if (col[k] == i) diag_[i] = k;
    if (diag_[i] < 0) throw std::runtime_error("ilu0: missing diagonal in row " + std::to_string(i));
  }

  // Doolittle IKJ restricted to the pattern of A.
  for (int i = 1; i < n; ++i) {
    for (int kk = ptr[i]; kk < ptr[i + 1] && col[kk] < i; ++kk) {
      const int k = col[kk];
      const double piv = val[diag_[k]];
      if (piv == 0.0) throw std::runtime_error("ilu0: zero pivot in row " + std::to_string(k));
      const double lik = val[kk] / piv;
      val[kk] = lik;
      // subtract lik * U(k, j) for j > k where (i, j) exists
      int ii = kk + 1;
      for (int jj = diag_[k] + 1; jj < ptr[k + 1]; ++jj) {
        const int j = col[jj];
        while (ii < ptr[i + 1] && col[ii] < j) ++ii;
        if (ii == ptr[i + 1]) break;
        if (col[ii] == j) val[ii] -= lik * val[jj];
      }
    }
    if (val[diag_[i]] == 0.0)
      throw std::runtime_error("ilu0: zero pivot in row " + std::to_string(i));
  }
}

void Ilu0::apply(std::span<const double> r, std::span<double> z) const {
  const auto& ptr = f_.row_ptr();
  const auto& col = f_.col_idx();
  const auto& val = f_.values();
  const int n = f_.rows();

  // L y = r (unit diagonal)
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    for (int k = ptr[i]; k < ptr[i + 1] && col[k] < i; ++k) s -= val[k] * z[col[k]];
    z[i] = s;
  }
  // U z = y
  for (int i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (int k = diag_[i] + 1; k < ptr[i + 1]; ++k) s -= val[k] * z[col[k]];
    z[i] = s / val[diag_[i]];
  }
}

AdditiveSchwarz2::AdditiveSchwarz2(const CsrMatrix& a, int overlap) : n_(a.rows()) {
  if (a.rows() != a.cols()) throw std::runtime_error("asm2: matrix not square");
  if (n_ < 4) throw std::runtime_error("asm2: system too small to split");
  const int mid = n_ / 2;
  const int ov = std::clamp(overlap, 0, mid - 1);

  dom_[0].begin = 0;
  dom_[0].end = std::min(n_, mid + ov);
  dom_[0].own_begin = 0;
  dom_[0].own_end = mid;
  dom_[1].begin = std::max(0, mid - ov);
  dom_[1].end = n_;
  dom_[1].own_begin = mid;
  dom_[1].own_end = n_;

  for (auto& d : dom_) {
    d.block = a.extract_block(d.begin, d.end, d.begin, d.end);
    d.solver = std::make_unique<Ilu0>(d.block);
  }
}

void AdditiveSchwarz2::apply(std::span<const double> r, std::span<double> z) const {
  std::fill(z.begin(), z.end(), 0.0);
  std::vector<double> rl, zl;
  for (const auto& d : dom_) {
    const int m = d.end - d.begin;
    rl.assign(r.begin() + d.begin, r.begin() + d.end);
    zl.assign(m, 0.0);
    d.solver->apply(rl, zl);
    for (int i = d.own_begin; i < d.own_end; ++i) z[i] = zl[i - d.begin];
  }
}

std::unique_ptr<LocalSolver> make_local_solver(const CsrMatrix& a, LocalSolverKind kind,
                                               int overlap) {
  if (kind == LocalSolverKind::AdditiveSchwarz2) return std::make_unique<AdditiveSchwarz2>(a, overlap);
  return std::make_unique<Ilu0>(a);
}

} // namespace ocuflow
