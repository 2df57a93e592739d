#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ocuflow/csr.hpp"
#include "ocuflow/gmres.hpp"
#include "ocuflow/ilu.hpp"

namespace ocuflow {

/// Monolithic unknown ordering: [ velocity | pressure | gauge | temperature ].
/// The gauge row pins the pressure mean through a single Lagrange multiplier.
struct SystemLayout {
  int n_u = 0; ///< velocity dofs (vector-valued, already times 2)
  int n_p = 0;
  int n_t = 0;
  int u_offset() const { return 0; }
  int p_offset() const { return n_u; }
  int lambda_row() const { return n_u + n_p; }
  int t_offset() const { return n_u + n_p + 1; }
  int total() const { return n_u + n_p + 1 + n_t; }
};

/// Approximation used for the pressure Schur complement B F^{-1} B^T.
enum class SchurKind {
  Mass, ///< scaled pressure mass: S^{-1} ~= mu M_p^{-1}
  Pcd   ///< pressure convection-diffusion: S^{-1} ~= M_p^{-1} F_p A_p^{-1}
};

struct BlockPrecondOptions {
  SchurKind schur = SchurKind::Pcd;
  LocalSolverKind subsolver = LocalSolverKind::Ilu0;
  int overlap = 2;          ///< additive-Schwarz overlap when selected
  double inner_tol = 1.0e-2;
  int inner_max_iter = 200;
};

/// Operators living on the pressure space that feed the Schur approximations.
/// `ap` must be the unpinned Neumann Laplacian; it is pinned internally.
struct PressureOperators {
  CsrMatrix mp; ///< pressure mass matrix
  CsrMatrix ap; ///< pressure stiffness matrix
  CsrMatrix fp; ///< mu * ap + rho * convection at the current state (Pcd only)
};

/// Block preconditioner for the coupled Jacobian: block diagonal across
/// (fluid, heat); the fluid part is the upper-triangular factor
/// [F G; 0 S] with the gauge row folded in by a bordered solve. All inner
/// solves are loose ILU-preconditioned GMRES, so the overall operator is
/// nonlinear and must be used with a flexible outer method.
class BlockPreconditioner {
public:
  BlockPreconditioner(const SystemLayout& layout, const CsrMatrix& jacobian,
                      PressureOperators pressure_ops, std::span<const double> gauge_vector,
                      double mu, const BlockPrecondOptions& opt);

  void apply(std::span<const double> r, std::span<double> z) const;
  VectorOp as_operator() const;

  /// Total inner GMRES iterations since construction (diagnostic).
  long inner_iterations() const { return inner_iters_; }
  /// Per-block splits of the same counter: velocity, pressure, heat.
  long inner_iterations_u() const { return inner_u_; }
  long inner_iterations_p() const { return inner_p_; }
  long inner_iterations_t() const { return inner_t_; }

private:
  void solve_schur(std::span<const double> r, std::span<double> z) const;
  void inner_solve(const CsrMatrix& mat, const LocalSolver& local, std::span<const double> b,
                   std::span<double> x, long& counter) const;

  SystemLayout layout_;
  BlockPrecondOptions opt_;
  double mu_;
  CsrMatrix f_;   // (u,u) block
  CsrMatrix g_;   // (u,p) block
  CsrMatrix ktt_; // (T,T) block
  PressureOperators pops_;
  std::vector<double> gauge_;
  std::unique_ptr<LocalSolver> f_local_;
  std::unique_ptr<LocalSolver> ktt_local_;
  std::unique_ptr<LocalSolver> mp_local_;
  std::unique_ptr<LocalSolver> ap_local_;
  std::vector<double> w_;   // S^{-1} m for the bordered gauge solve
  double mt_w_ = 0.0;       // m . w
  mutable long inner_iters_ = 0;
  mutable long inner_u_ = 0, inner_p_ = 0, inner_t_ = 0;
};

} // namespace ocuflow
