#pragma once

#include <span>
#include <string>
#include <vector>

namespace ocuflow {

// ============================================================================
// Built-in verification problems: manufactured solutions on the unit square,
// the buoyant-cavity benchmark and a hydrostatic rest state. Each returns
// plain numbers so callers (tests, CLI) can apply their own thresholds.
// ============================================================================

struct MmsLevel {
  double h;
  double err_u, err_p, err_t; // L2 errors against the manufactured fields
};

struct MmsReport {
  std::vector<MmsLevel> levels;
  double rate_u = 0.0, rate_p = 0.0, rate_t = 0.0; // observed orders, finest pair
};

/// Polynomial manufactured solution contained in the discrete spaces
/// (quadratic velocity, linear pressure, linear temperature): the solver must
/// reproduce it to solver tolerance on a single n x n grid.
MmsReport mms_exact_reproduction(int n);

/// Trigonometric manufactured solution; errors on a sequence of n x n grids
/// plus observed convergence orders. `jitter` perturbs interior vertices to
/// break mesh symmetry.
MmsReport mms_convergence(std::span<const int> ns, double jitter = 0.0);

struct CavityReport {
  int n = 0;
  double nu_hot = 0.0, nu_cold = 0.0; // consistent-flux wall Nusselt numbers
  double u_max_mid = 0.0;             // max |u_x| on the vertical midline
  double v_max_mid = 0.0;             // max |u_y| on the horizontal midline
};

/// Differentially heated square cavity at Ra = 1e3, Pr = 0.71 (hot left wall
/// T=1, cold right wall T=0, adiabatic top/bottom), run on an n x n grid.
/// Velocities are reported in diffusion scaling (alpha / L).
CavityReport cavity_benchmark(int n);

/// Richardson extrapolation of a sequence value pair with grid ratio 2 and
/// observed order p.
double richardson_limit(double coarse, double fine, double p);

struct HydrostaticReport {
  double u_norm = 0.0;   // L2 norm of the velocity (exact: zero)
  double p_err = 0.0;    // L2 error against the linear hydrostatic pressure
  double span_pa = 0.0;  // max - min discrete pressure
  double exact_span_pa = 0.0;
};

/// Uniformly buoyant fluid at rest in a closed box: velocity must vanish and
/// the pressure must be exactly linear in the gravity direction.
HydrostaticReport hydrostatic_check(int n);

} // namespace ocuflow
