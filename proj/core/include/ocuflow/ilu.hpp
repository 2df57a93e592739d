#pragma once

#include <memory>
#include <span>

#include "ocuflow/csr.hpp"

namespace ocuflow {

/// Applies an approximate inverse; base for the sub-block solvers used inside
/// the outer Krylov preconditioner.
class LocalSolver {
public:
  virtual ~LocalSolver() = default;
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
};

// ============================================================================
// ILU(0): incomplete LU sharing the sparsity pattern of A. L has unit
// diagonal; apply() performs the forward/backward substitution pair.
// ============================================================================
class Ilu0 final : public LocalSolver {
public:
  explicit Ilu0(const CsrMatrix& a);
  void apply(std::span<const double> r, std::span<double> z) const override;

private:
  CsrMatrix f_;            // factor values on A's pattern
  std::vector<int> diag_;  // value index of the diagonal per row
};

// ============================================================================
// Two-subdomain restricted additive Schwarz with ILU(0) subdomain solves.
// Rows are split at n/2 with symmetric overlap; each solution is summed back
// over the owned (non-overlapping) range only.
// ============================================================================
class AdditiveSchwarz2 final : public LocalSolver {
public:
  AdditiveSchwarz2(const CsrMatrix& a, int overlap);
  void apply(std::span<const double> r, std::span<double> z) const override;

private:
  struct Domain {
    int begin = 0, end = 0;       // extended range factored
    int own_begin = 0, own_end = 0; // range written back
    CsrMatrix block;
    std::unique_ptr<Ilu0> solver;
  };
  Domain dom_[2];
  int n_ = 0;
};

enum class LocalSolverKind { Ilu0, AdditiveSchwarz2 };

std::unique_ptr<LocalSolver> make_local_solver(const CsrMatrix& a, LocalSolverKind kind,
                                               int overlap = 2);

} // namespace ocuflow
