#include "ocuflow/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ocuflow {

namespace {

std::vector<double> conductivity_table(const PhysicalParams& p, const Mesh& mesh) {
  std::vector<double> k(static_cast<size_t>(region::count), 0.0);
  k[static_cast<size_t>(region::AqueousHumor)] = p.k_ah;
  k[static_cast<size_t>(region::Cornea)] = p.k_cornea;
  k[static_cast<size_t>(region::Iris)] = p.k_iris;
  k[static_cast<size_t>(region::Lens)] = p.k_lens;
  k[static_cast<size_t>(region::Vitreous)] = p.k_vitreous;
  k[static_cast<size_t>(region::OuterShell)] = p.k_outershell;
  for (int r : mesh.cell_region)
    if (k.at(static_cast<size_t>(r)) <= 0.0)
      throw std::runtime_error("missing thermal conductivity for region '" + region_name(r) +
                               "'");
  return k;
}

} // namespace

CoupledProblem::CoupledProblem(const Mesh& mesh, const PhysicalParams& params, Posture posture,
                               CoupledOptions opt)
    : mesh_(mesh),
      params_(params),
      gravity_(posture_gravity(posture, params.g)),
      opt_(std::move(opt)),
      v_(mesh, 2, 2, SpaceSupport::FluidOnly),
      q_(mesh, 1, 1, SpaceSupport::FluidOnly),
      s_(mesh, 2, 1, SpaceSupport::Whole) {
  layout_.n_u = v_.n_dofs();
  layout_.n_p = q_.n_dofs();
  layout_.n_t = s_.n_dofs();
  const auto walls = fluid_wall_tags();
  velocity_bc_.push_back({std::vector<int>(walls.begin(), walls.end()),
                          [](const double*, double* u) { u[0] = u[1] = 0.0; }});
  robin_.push_back({boundary::GammaBody, params_.h_bl, params_.t_bl, 0.0});
  robin_.push_back(
      {boundary::GammaAmb, params_.h_amb + params_.h_r, params_.t_amb, params_.evap});
  if (params_.h_uveal > 0.0)
    robin_.push_back({boundary::GammaI, params_.h_uveal, params_.t_bl, 0.0});
}

void CoupledProblem::set_velocity_dirichlet(std::vector<int> tags, SpatialFn value) {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  velocity_bc_.clear();
  velocity_bc_.push_back({std::move(tags), std::move(value)});
}

void CoupledProblem::add_temperature_dirichlet(std::vector<int> tags, SpatialFn value) {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  temperature_bc_.push_back({std::move(tags), std::move(value)});
}

void CoupledProblem::clear_robin() {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  robin_.clear();
}

void CoupledProblem::add_robin(int tag, double h, double t_ext, double flux_offset) {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  robin_.push_back({tag, h, t_ext, flux_offset});
}

void CoupledProblem::set_momentum_forcing(SpatialFn f) {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  momentum_forcing_ = std::move(f);
}

void CoupledProblem::set_heat_forcing(SpatialFn f) {
  if (finalized_)
    throw std::logic_error("problem already finalized");
  heat_forcing_ = std::move(f);
}

void CoupledProblem::collect_dirichlet() {
  dirichlet_.clear();
  for (const auto& bc : velocity_bc_) {
    const auto dofs = v_.dofs_on_tags(bc.tags);
    for (int sd : dofs) {
      double val[2] = {0.0, 0.0};
      bc.value(&v_.dof_coords()[static_cast<size_t>(sd) * 2], val);
      dirichlet_[2 * sd] = val[0];
      dirichlet_[2 * sd + 1] = val[1];
    }
  }
  for (const auto& bc : temperature_bc_) {
    const auto dofs = s_.dofs_on_tags(bc.tags);
    for (int sd : dofs) {
      double val = 0.0;
      bc.value(&s_.dof_coords()[static_cast<size_t>(sd) * 2], &val);
      dirichlet_[layout_.t_offset() + sd] = val;
    }
  }
  dirichlet_rows_.clear();
  dirichlet_values_.clear();
  for (const auto& [row, val] : dirichlet_) {
    dirichlet_rows_.push_back(row);
    dirichlet_values_.push_back(val);
  }
}

void CoupledProblem::finalize() {
  if (finalized_)
    return;
  finalized_ = true;
  collect_dirichlet();
  k_table_ = conductivity_table(params_, mesh_);
  const int p_off = layout_.p_offset();
  const int t_off = layout_.t_offset();
  const int lam = layout_.lambda_row();

  {
    SparsityPattern sp(layout_.n_u, layout_.n_u);
    pattern_cells(sp, v_, v_, 0, 0);
    a_visc_ = sp.build();
    n_adv_ = sp.build();
  }
  assemble_diffusion(v_, RegionValue(params_.mu), {&a_visc_}, quad_degree_mass(2));
  {
    SparsityPattern sp(layout_.n_p, layout_.n_u);
    pattern_cells(sp, q_, v_, 0, 0);
    b_ = sp.build();
  }
  assemble_divergence(q_, v_, {&b_});
  {
    SparsityPattern sp(layout_.n_u, layout_.n_t);
    pattern_cells(sp, v_, s_, 0, 0);
    c_buoy_ = sp.build();
  }
  {
    SparsityPattern sp(layout_.n_t, layout_.n_t);
    pattern_cells(sp, s_, s_, 0, 0);
    k_heat_ = sp.build();
    n_heat_ = sp.build();
  }
  {
    SparsityPattern sp(layout_.n_p, layout_.n_p);
    pattern_cells(sp, q_, q_, 0, 0);
    mp_ = sp.build();
    ap_ = sp.build();
  }
  assemble_mass(q_, RegionValue(1.0), {&mp_}, quad_degree_mass(1));
  assemble_diffusion(q_, RegionValue(1.0), {&ap_}, quad_degree_mass(1));
  m_.assign(static_cast<size_t>(layout_.n_p), 0.0);
  assemble_load(
      q_, [](const double*, double* o) { o[0] = 1.0; }, {m_, 0}, quad_degree_mass(1));

  const_rhs_.assign(static_cast<size_t>(layout_.total()), 0.0);
  assemble_buoyancy(v_, s_, params_.rho, params_.beta, gravity_.data(), params_.t_ref,
                    {&c_buoy_}, {const_rhs_, 0}, quad_degree_mass(2));
  assemble_diffusion(s_, RegionValue::by_region(k_table_), {&k_heat_}, quad_degree_mass(2));
  for (const auto& rb : robin_)
    apply_robin(s_, rb.tag, rb.h, rb.t_ext, rb.flux_offset, {&k_heat_}, {const_rhs_, t_off});
  if (momentum_forcing_)
    assemble_load(v_, momentum_forcing_, {const_rhs_, 0}, 6);
  if (heat_forcing_)
    assemble_load(s_, heat_forcing_, {const_rhs_, t_off}, 6);

  SparsityPattern sp(layout_.total(), layout_.total());
  pattern_cells(sp, v_, v_, 0, 0);
  pattern_cells(sp, q_, v_, p_off, 0);
  pattern_cells(sp, v_, q_, 0, p_off);
  pattern_cells(sp, v_, s_, 0, t_off);
  pattern_cells(sp, s_, v_, t_off, 0);
  pattern_cells(sp, s_, s_, t_off, t_off);
  for (int k = 0; k < layout_.n_p; ++k) {
    sp.insert(p_off + k, lam);
    sp.insert(lam, p_off + k);
  }
  sp.insert(lam, lam);
  jac_ = sp.build();
}

std::span<const double> CoupledProblem::u_part(std::span<const double> x) const {
  return x.subspan(0, static_cast<size_t>(layout_.n_u));
}
std::span<const double> CoupledProblem::p_part(std::span<const double> x) const {
  return x.subspan(static_cast<size_t>(layout_.p_offset()), static_cast<size_t>(layout_.n_p));
}
std::span<const double> CoupledProblem::t_part(std::span<const double> x) const {
  return x.subspan(static_cast<size_t>(layout_.t_offset()), static_cast<size_t>(layout_.n_t));
}
double CoupledProblem::lambda_part(std::span<const double> x) const {
  return x[static_cast<size_t>(layout_.lambda_row())];
}

void CoupledProblem::residual(std::span<const double> x, std::span<double> r) {
  finalize();
  const int nu = layout_.n_u;
  const int np = layout_.n_p;
  const int nt = layout_.n_t;
  const auto u = u_part(x);
  const auto p = p_part(x);
  const auto T = t_part(x);
  const double lambda = lambda_part(x);
  std::fill(r.begin(), r.end(), 0.0);

  n_adv_.set_zero();
  assemble_convection_vector(v_, u, params_.rho, {&n_adv_}, nullptr, quad_degree_convection(2));
  n_heat_.set_zero();
  assemble_convection_scalar(s_, v_, u, params_.rho * params_.cp, {&n_heat_},
                             quad_degree_convection(2));

  std::vector<double> tmp(static_cast<size_t>(std::max({nu, np, nt})));
  auto ru = r.subspan(0, static_cast<size_t>(nu));
  a_visc_.multiply(u, ru);
  std::span<double> tu(tmp.data(), static_cast<size_t>(nu));
  n_adv_.multiply(u, tu);
  axpy(1.0, tu, ru);
  b_.multiply_transpose(p, tu);
  axpy(-1.0, tu, ru);
  c_buoy_.multiply(T, tu);
  axpy(-1.0, tu, ru);

  auto rp = r.subspan(static_cast<size_t>(layout_.p_offset()), static_cast<size_t>(np));
  b_.multiply(u, rp);
  axpy(lambda, m_, rp);
  r[static_cast<size_t>(layout_.lambda_row())] = dot(m_, p);

  auto rt = r.subspan(static_cast<size_t>(layout_.t_offset()), static_cast<size_t>(nt));
  k_heat_.multiply(T, rt);
  std::span<double> tt(tmp.data(), static_cast<size_t>(nt));
  n_heat_.multiply(T, tt);
  axpy(1.0, tt, rt);

  axpy(-1.0, const_rhs_, r);

  for (size_t i = 0; i < dirichlet_rows_.size(); ++i) {
    const int row = dirichlet_rows_[i];
    r[static_cast<size_t>(row)] = x[static_cast<size_t>(row)] - dirichlet_values_[i];
  }
}

const CsrMatrix& CoupledProblem::assemble_jacobian(std::span<const double> x) {
  finalize();
  const auto u = u_part(x);
  const auto T = t_part(x);
  const int p_off = layout_.p_offset();
  const int t_off = layout_.t_offset();
  const int lam = layout_.lambda_row();
  jac_.set_zero();

  assemble_diffusion(v_, RegionValue(params_.mu), {&jac_, 0, 0}, quad_degree_mass(2));
  {
    const BlockView advect{&jac_, 0, 0};
    const BlockView react{&jac_, 0, 0};
    assemble_convection_vector(v_, u, params_.rho, advect, &react, quad_degree_convection(2));
  }
  assemble_divergence(q_, v_, {&jac_, p_off, 0});
  assemble_divergence(q_, v_, {&jac_, 0, p_off, /*swap=*/true, /*scale=*/-1.0});
  {
    std::vector<double> scratch(static_cast<size_t>(layout_.n_u), 0.0);
    assemble_buoyancy(v_, s_, params_.rho, params_.beta, gravity_.data(), params_.t_ref,
                      {&jac_, 0, t_off, false, -1.0}, {scratch, 0}, quad_degree_mass(2));
  }
  assemble_diffusion(s_, RegionValue::by_region(k_table_), {&jac_, t_off, t_off},
                     quad_degree_mass(2));
  {
    std::vector<double> scratch(static_cast<size_t>(layout_.n_t), 0.0);
    for (const auto& rb : robin_)
      apply_robin(s_, rb.tag, rb.h, rb.t_ext, rb.flux_offset, {&jac_, t_off, t_off},
                  {scratch, 0});
  }
  assemble_convection_scalar(s_, v_, u, params_.rho * params_.cp, {&jac_, t_off, t_off},
                             quad_degree_convection(2));
  assemble_heat_velocity_coupling(s_, v_, T, params_.rho * params_.cp, {&jac_, t_off, 0},
                                  quad_degree_convection(2));
  for (int k = 0; k < layout_.n_p; ++k) {
    jac_.add(p_off + k, lam, m_[static_cast<size_t>(k)]);
    jac_.add(lam, p_off + k, m_[static_cast<size_t>(k)]);
  }
  for (int row : dirichlet_rows_)
    jac_.set_row_identity(row);
  return jac_;
}

void CoupledProblem::solve_jacobian(std::span<const double> x, std::span<const double> rhs,
                                    std::span<double> dx) {
  assemble_jacobian(x);
  const auto u = u_part(x);

  // The momentum rows scale like mu while the heat rows scale like rho*cp;
  // for water-like parameters that is a 1e9 imbalance and the temperature ->
  // velocity coupling block wrecks the outer iteration.  Rescaling the heat
  // rows to thermal-diffusivity form balances the system without changing
  // the solution.  With unit parameters the scale is exactly one.
  const double heat_scale = 1.0 / (params_.rho * params_.cp);
  std::vector<double> b(rhs.begin(), rhs.end());
  if (heat_scale != 1.0) {
    const int t_off = layout_.t_offset();
    const auto& ptr = jac_.row_ptr();
    auto& val = jac_.values();
    for (int row = t_off; row < layout_.total(); ++row) {
      for (int k = ptr[static_cast<size_t>(row)]; k < ptr[static_cast<size_t>(row) + 1]; ++k)
        val[static_cast<size_t>(k)] *= heat_scale;
      b[static_cast<size_t>(row)] *= heat_scale;
    }
  }

  PressureOperators pops{mp_, ap_, ap_};
  {
    auto& fv = pops.fp.values();
    const auto& av = ap_.values();
    for (size_t i = 0; i < fv.size(); ++i)
      fv[i] = params_.mu * av[i];
    assemble_convection_scalar(q_, v_, u, params_.rho, {&pops.fp}, quad_degree_convection(1));
  }
  const BlockPreconditioner prec(layout_, jac_, std::move(pops), m_, params_.mu, opt_.precond);
  const VectorOp op = [this](std::span<const double> a, std::span<double> y) {
    jac_.multiply(a, y);
  };
  const VectorOp pc = prec.as_operator();
  GmresOptions gopt;
  gopt.rtol = opt_.lin_rtol;
  gopt.atol = 0.0;
  gopt.max_iter = opt_.gmres_max_iter;
  gopt.restart = opt_.gmres_restart;
  std::fill(dx.begin(), dx.end(), 0.0);
  last_linear_ = gmres(op, b, dx, &pc, gopt);
  last_inner_iters_ = prec.inner_iterations();
  last_inner_u_ = prec.inner_iterations_u();
  last_inner_p_ = prec.inner_iterations_p();
  last_inner_t_ = prec.inner_iterations_t();
}

std::vector<double> CoupledProblem::initial_guess() {
  finalize();
  const int nt = layout_.n_t;
  const int t_off = layout_.t_offset();
  std::vector<double> x(static_cast<size_t>(layout_.total()), 0.0);

  CsrMatrix k = k_heat_;
  std::vector<double> rhs(const_rhs_.begin() + t_off, const_rhs_.begin() + t_off + nt);
  std::vector<int> rows;
  std::vector<double> vals;
  for (const auto& [row, val] : dirichlet_)
    if (row >= t_off) {
      rows.push_back(row - t_off);
      vals.push_back(val);
    }
  apply_dirichlet(k, rhs, rows, vals, false);

  const Ilu0 ilu(k);
  const VectorOp op = [&k](std::span<const double> a, std::span<double> b) { k.multiply(a, b); };
  const VectorOp pc = [&ilu](std::span<const double> a, std::span<double> b) { ilu.apply(a, b); };
  GmresOptions gopt;
  gopt.rtol = 1.0e-10;
  gopt.max_iter = 4000;
  gopt.restart = 200;
  std::span<double> xt(x.data() + t_off, static_cast<size_t>(nt));
  const GmresResult res = gmres(op, rhs, xt, &pc, gopt);
  if (!res.converged)
    throw std::runtime_error("conduction start failed to converge");
  return x;
}

NewtonReport CoupledProblem::solve(std::vector<double>& x) {
  x = initial_guess();
  return newton_solve(*this, x, opt_.newton);
}

} // namespace ocuflow
