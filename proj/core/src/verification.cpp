#include "ocuflow/verification.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ocuflow/coupled.hpp"
#include "ocuflow/unit_meshes.hpp"

namespace ocuflow {

namespace {

constexpr double kPi = std::numbers::pi;

PhysicalParams unit_params() {
  PhysicalParams p;
  p.mu = 1.0;
  p.rho = 1.0;
  p.cp = 1.0;
  p.beta = 1.0;
  p.k_ah = 1.0;
  p.g = 1.0;
  p.t_ref = 0.0;
  return p;
}

CoupledOptions tight_options() {
  CoupledOptions opt;
  opt.lin_rtol = 1.0e-10;
  opt.newton.rtol = 1.0e-10;
  opt.newton.atol = 1.0e-13;
  opt.newton.max_iter = 30;
  return opt;
}

double observed_order(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

// --------------------------------------------------------------------------
// Case 1: fields inside the discrete spaces (machine-precision reproduction).
//   u = (y^2, x^2)   p = x + y - 1   T = x - y     g = (0, -1)
// --------------------------------------------------------------------------

void exact_u_poly(const double* x, double* o) {
  o[0] = x[1] * x[1];
  o[1] = x[0] * x[0];
}
void exact_p_poly(const double* x, double* o) { o[0] = x[0] + x[1] - 1.0; }
void exact_t_poly(const double* x, double* o) { o[0] = x[0] - x[1]; }
void forcing_u_poly(const double* x, double* o) {
  const double cx = x[0], cy = x[1];
  o[0] = 2.0 * cx * cx * cy - 1.0;
  o[1] = 2.0 * cx * cy * cy - 1.0 - cx + cy;
}
void forcing_t_poly(const double* x, double* o) { o[0] = x[1] * x[1] - x[0] * x[0]; }

// --------------------------------------------------------------------------
// Case 2: trigonometric fields (order checks).
//   u = (sin(pi x) cos(pi y), -cos(pi x) sin(pi y))
//   p = cos(pi x) cos(pi y)
//   T = sin(pi x) sin(pi y) + x
// --------------------------------------------------------------------------

void exact_u_trig(const double* x, double* o) {
  o[0] = std::sin(kPi * x[0]) * std::cos(kPi * x[1]);
  o[1] = -std::cos(kPi * x[0]) * std::sin(kPi * x[1]);
}
void exact_p_trig(const double* x, double* o) { o[0] = std::cos(kPi * x[0]) * std::cos(kPi * x[1]); }
void exact_t_trig(const double* x, double* o) {
  o[0] = std::sin(kPi * x[0]) * std::sin(kPi * x[1]) + x[0];
}
void forcing_u_trig(const double* x, double* o) {
  const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
  const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
  o[0] = 0.5 * kPi * std::sin(2.0 * kPi * x[0]) + 2.0 * kPi * kPi * sx * cy - kPi * sx * cy;
  o[1] = 0.5 * kPi * std::sin(2.0 * kPi * x[1]) - 2.0 * kPi * kPi * cx * sy - kPi * cx * sy -
         (sx * sy + x[0]);
}
void forcing_t_trig(const double* x, double* o) {
  const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
  const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
  (void)cx;
  o[0] = sx * cy + 2.0 * kPi * kPi * sx * sy;
}

struct MmsCase {
  void (*u)(const double*, double*);
  void (*p)(const double*, double*);
  void (*t)(const double*, double*);
  void (*fu)(const double*, double*);
  void (*ft)(const double*, double*);
};

MmsLevel solve_mms(const MmsCase& cs, int n, double jitter) {
  const Mesh mesh = unit_square_mesh(n, n, SideTags{}, jitter);
  CoupledProblem prob(mesh, unit_params(), Posture::Standing, tight_options());
  prob.clear_robin();
  const std::vector<int> all{boundary::GammaAmb};
  prob.set_velocity_dirichlet(all, cs.u);
  prob.add_temperature_dirichlet(all, cs.t);
  prob.set_momentum_forcing(cs.fu);
  prob.set_heat_forcing(cs.ft);

  std::vector<double> x;
  const NewtonReport rep = prob.solve(x);
  if (!rep.converged)
    throw std::runtime_error("manufactured-solution solve did not converge");

  MmsLevel lvl;
  lvl.h = 1.0 / n;
  lvl.err_u = l2_error(prob.velocity_space(), prob.u_part(x), cs.u, 6);
  lvl.err_p = l2_error(prob.pressure_space(), prob.p_part(x), cs.p, 6);
  lvl.err_t = l2_error(prob.temperature_space(), prob.t_part(x), cs.t, 6);
  return lvl;
}

} // namespace

MmsReport mms_exact_reproduction(int n) {
  const MmsCase cs{exact_u_poly, exact_p_poly, exact_t_poly, forcing_u_poly, forcing_t_poly};
  MmsReport rep;
  rep.levels.push_back(solve_mms(cs, n, 0.0));
  return rep;
}

MmsReport mms_convergence(std::span<const int> ns, double jitter) {
  const MmsCase cs{exact_u_trig, exact_p_trig, exact_t_trig, forcing_u_trig, forcing_t_trig};
  MmsReport rep;
  for (int n : ns)
    rep.levels.push_back(solve_mms(cs, n, jitter));
  if (rep.levels.size() >= 2) {
    const MmsLevel& a = rep.levels[rep.levels.size() - 2];
    const MmsLevel& b = rep.levels.back();
    rep.rate_u = observed_order(a.err_u, b.err_u);
    rep.rate_p = observed_order(a.err_p, b.err_p);
    rep.rate_t = observed_order(a.err_t, b.err_t);
  }
  return rep;
}

// ============================================================================
// Buoyant cavity
// ============================================================================

namespace {

/// Consistent-flux Nusselt number: sum of the unconstrained heat-residual
/// rows over the wall dofs equals the wall heat flow (outward positive for
/// the discrete solution, partition of unity along the wall).
double wall_flux(const CoupledProblem& prob, std::span<const double> x, int tag) {
  const FunctionSpace& s = prob.temperature_space();
  const FunctionSpace& v = prob.velocity_space();
  const int ns = s.n_scalar();
  SparsityPattern sp(ns, ns);
  pattern_cells(sp, s, s, 0, 0);
  CsrMatrix op = sp.build();
  assemble_diffusion(s, RegionValue(1.0), {&op}, quad_degree_mass(2));
  assemble_convection_scalar(s, v, prob.u_part(x), 1.0, {&op}, quad_degree_convection(2));
  std::vector<double> r(static_cast<size_t>(ns));
  op.multiply(prob.t_part(x), r);
  const int tags[1] = {tag};
  double flux = 0.0;
  for (int d : s.dofs_on_tags(tags))
    flux += r[static_cast<size_t>(d)];
  return flux;
}

} // namespace

CavityReport cavity_benchmark(int n) {
  // Ra = g * beta * dT * L^3 / (nu * alpha) = g / 0.71 with the unit choices
  // below, so g = 710 gives Ra = 1e3 at Pr = 0.71.
  PhysicalParams p = unit_params();
  p.mu = 0.71;
  p.g = 710.0;
  p.t_ref = 0.5;

  SideTags tags;
  tags.left = boundary::GammaC;
  tags.right = boundary::GammaI;
  tags.top = boundary::GammaBody;
  tags.bottom = boundary::GammaBody;
  const Mesh mesh = unit_square_mesh(n, n, tags, 0.0);

  CoupledOptions opt = tight_options();
  opt.newton.max_iter = 40;
  CoupledProblem prob(mesh, p, Posture::Standing, opt);
  prob.clear_robin();
  prob.set_velocity_dirichlet({boundary::GammaC, boundary::GammaI, boundary::GammaBody},
                              [](const double*, double* o) { o[0] = o[1] = 0.0; });
  prob.add_temperature_dirichlet({boundary::GammaC}, [](const double*, double* o) { o[0] = 1.0; });
  prob.add_temperature_dirichlet({boundary::GammaI}, [](const double*, double* o) { o[0] = 0.0; });

  std::vector<double> x;
  const NewtonReport rep = prob.solve(x);
  if (!rep.converged)
    throw std::runtime_error("cavity solve did not converge");

  CavityReport out;
  out.n = n;
  out.nu_hot = wall_flux(prob, x, boundary::GammaC);
  out.nu_cold = -wall_flux(prob, x, boundary::GammaI);

  const FunctionSpace& v = prob.velocity_space();
  const auto u = prob.u_part(x);
  const auto& xy = v.dof_coords();
  for (int i = 0; i < v.n_scalar(); ++i) {
    const double cx = xy[static_cast<size_t>(i) * 2];
    const double cy = xy[static_cast<size_t>(i) * 2 + 1];
    if (std::abs(cx - 0.5) < 1.0e-12)
      out.u_max_mid = std::max(out.u_max_mid, std::abs(u[static_cast<size_t>(i) * 2]));
    if (std::abs(cy - 0.5) < 1.0e-12)
      out.v_max_mid = std::max(out.v_max_mid, std::abs(u[static_cast<size_t>(i) * 2 + 1]));
  }
  return out;
}

double richardson_limit(double coarse, double fine, double p) {
  return fine + (fine - coarse) / (std::pow(2.0, p) - 1.0);
}

// ============================================================================
// Hydrostatic rest state
// ============================================================================

HydrostaticReport hydrostatic_check(int n) {
  PhysicalParams p;
  p.mu = 1.0e-3;
  p.rho = 1000.0;
  p.cp = 4178.0;
  p.beta = 3.0e-4;
  p.k_ah = 0.576;
  p.g = 9.81;
  p.t_ref = 298.0;

  const double dT = 1.0; // uniform superheat; buoyancy is constant in space
  const double t_wall = p.t_ref + dT;
  const Mesh mesh = unit_square_mesh(n, n, SideTags{}, 0.0);
  CoupledProblem prob(mesh, p, Posture::Standing, tight_options());
  prob.clear_robin();
  prob.set_velocity_dirichlet({boundary::GammaAmb},
                              [](const double*, double* o) { o[0] = o[1] = 0.0; });
  prob.add_temperature_dirichlet({boundary::GammaAmb},
                                 [t_wall](const double*, double* o) { o[0] = t_wall; });

  std::vector<double> x;
  const NewtonReport rep = prob.solve(x);
  if (!rep.converged)
    throw std::runtime_error("hydrostatic solve did not converge");

  HydrostaticReport out;
  out.u_norm = l2_norm_field(prob.velocity_space(), prob.u_part(x), 4);
  const double slope = p.rho * p.beta * dT * p.g; // dp/dy, zero mean over the box
  out.p_err = l2_error(
      prob.pressure_space(), prob.p_part(x),
      [slope](const double* q, double* o) { o[0] = slope * (q[1] - 0.5); }, 6);
  const auto pr = prob.p_part(x);
  double pmin = pr[0], pmax = pr[0];
  for (double v : pr) {
    pmin = std::min(pmin, v);
    pmax = std::max(pmax, v);
  }
  out.span_pa = pmax - pmin;
  out.exact_span_pa = slope;
  return out;
}

} // namespace ocuflow
