#include "ocuflow/block_system.hpp"

#include <cmath>
#include <stdexcept>

namespace ocuflow {

BlockPreconditioner::BlockPreconditioner(const SystemLayout& layout, const CsrMatrix& jacobian,
                                         PressureOperators pressure_ops,
                                         std::span<const double> gauge_vector, double mu,
                                         const BlockPrecondOptions& opt)
    : layout_(layout),
      opt_(opt),
      mu_(mu),
      f_(jacobian.extract_block(0, layout.n_u, 0, layout.n_u)),
      g_(jacobian.extract_block(0, layout.n_u, layout.p_offset(), layout.p_offset() + layout.n_p)),
      ktt_(jacobian.extract_block(layout.t_offset(), layout.t_offset() + layout.n_t,
                                  layout.t_offset(), layout.t_offset() + layout.n_t)),
      pops_(std::move(pressure_ops)),
      gauge_(gauge_vector.begin(), gauge_vector.end()) {
  if (static_cast<int>(gauge_.size()) != layout.n_p)
    throw std::invalid_argument("gauge vector size mismatch");
  f_local_ = make_local_solver(f_, opt.subsolver, opt.overlap);
  ktt_local_ = make_local_solver(ktt_, opt.subsolver, opt.overlap);
  mp_local_ = make_local_solver(pops_.mp, LocalSolverKind::Ilu0, opt.overlap);
  if (opt.schur == SchurKind::Pcd) {
    pops_.ap.set_row_identity(0); // pin the Neumann null space
    ap_local_ = make_local_solver(pops_.ap, LocalSolverKind::Ilu0, opt.overlap);
  }
  // Bordered gauge solve needs w = S^{-1} m once.
  w_.assign(static_cast<size_t>(layout.n_p), 0.0);
  solve_schur(gauge_, w_);
  mt_w_ = dot(gauge_, w_);
  if (mt_w_ == 0.0 || !std::isfinite(mt_w_))
    throw std::runtime_error("degenerate pressure gauge in preconditioner");
}

void BlockPreconditioner::inner_solve(const CsrMatrix& mat, const LocalSolver& local,
                                      std::span<const double> b, std::span<double> x,
                                      long& counter) const {
  const VectorOp op = [&mat](std::span<const double> v, std::span<double> out) {
    mat.multiply(v, out);
  };
  const VectorOp prec = [&local](std::span<const double> v, std::span<double> out) {
    local.apply(v, out);
  };
  GmresOptions gopt;
  gopt.rtol = opt_.inner_tol;
  gopt.atol = 0.0;
  gopt.max_iter = opt_.inner_max_iter;
  gopt.restart = std::min(opt_.inner_max_iter, 100);
  std::fill(x.begin(), x.end(), 0.0);
  const GmresResult res = gmres(op, b, x, &prec, gopt);
  inner_iters_ += res.iterations;
  counter += res.iterations;
}

// Applies the approximate inverse of S ~ B F^{-1} B^T.
void BlockPreconditioner::solve_schur(std::span<const double> r, std::span<double> z) const {
  const size_t np = static_cast<size_t>(layout_.n_p);
  if (opt_.schur == SchurKind::Mass) {
    // S ~= (1/mu) M_p  =>  z = mu * M_p^{-1} r
    inner_solve(pops_.mp, *mp_local_, r, z, inner_p_);
    for (size_t i = 0; i < np; ++i)
      z[i] *= mu_;
    return;
  }
  // Pcd: z = M_p^{-1} F_p A_p^{-1} r
  std::vector<double> t1(np, 0.0), t2(np, 0.0);
  inner_solve(pops_.ap, *ap_local_, r, t1, inner_p_);
  pops_.fp.multiply(t1, t2);
  inner_solve(pops_.mp, *mp_local_, t2, z, inner_p_);
}

void BlockPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const int nu = layout_.n_u;
  const int np = layout_.n_p;
  const int nt = layout_.n_t;
  std::fill(z.begin(), z.end(), 0.0);

  // Heat block (independent of the fluid part).
  {
    std::vector<double> rt(r.begin() + layout_.t_offset(), r.begin() + layout_.t_offset() + nt);
    std::vector<double> zt(static_cast<size_t>(nt), 0.0);
    inner_solve(ktt_, *ktt_local_, rt, zt, inner_t_);
    std::copy(zt.begin(), zt.end(), z.begin() + layout_.t_offset());
  }

  // Pressure + gauge by the bordered Schur solve:
  //   [S m; m^T 0] [z_p; z_l] = [r_p; r_l]
  //   z_l = (m^T S^{-1} r_p - r_l) / (m^T S^{-1} m),  z_p = S^{-1} r_p - z_l w.
  std::vector<double> rp(r.begin() + layout_.p_offset(), r.begin() + layout_.p_offset() + np);
  std::vector<double> y(static_cast<size_t>(np), 0.0);
  solve_schur(rp, y);
  const double r_lambda = r[static_cast<size_t>(layout_.lambda_row())];
  const double z_lambda = (dot(gauge_, y) - r_lambda) / mt_w_;
  std::vector<double> zp(static_cast<size_t>(np));
  for (int i = 0; i < np; ++i)
    zp[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] - z_lambda * w_[static_cast<size_t>(i)];

  // Velocity: z_u = F^{-1} (r_u - G z_p).
  std::vector<double> ru(r.begin(), r.begin() + nu);
  std::vector<double> gzp(static_cast<size_t>(nu), 0.0);
  g_.multiply(zp, gzp);
  for (int i = 0; i < nu; ++i)
    ru[static_cast<size_t>(i)] -= gzp[static_cast<size_t>(i)];
  std::vector<double> zu(static_cast<size_t>(nu), 0.0);
  inner_solve(f_, *f_local_, ru, zu, inner_u_);

  std::copy(zu.begin(), zu.end(), z.begin());
  std::copy(zp.begin(), zp.end(), z.begin() + layout_.p_offset());
  z[static_cast<size_t>(layout_.lambda_row())] = z_lambda;
}

VectorOp BlockPreconditioner::as_operator() const {
  return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
}

} // namespace ocuflow
