#pragma once

#include <functional>
#include <span>

#include "ocuflow/csr.hpp"
#include "ocuflow/function_space.hpp"
#include "ocuflow/quadrature.hpp"

namespace ocuflow {

/// Piecewise-constant material coefficient, either uniform or looked up by
/// region id.
class RegionValue {
public:
  RegionValue(double uniform) : uniform_(uniform) {} // NOLINT: implicit by design
  static RegionValue by_region(std::vector<double> values);
  double operator()(int region) const;

private:
  double uniform_ = 0.0;
  std::vector<double> per_region_;
};

/// Destination block inside a larger matrix: indices are shifted by
/// (row_offset, col_offset) on write; `swap` transposes the contribution and
/// `scale` multiplies it, so e.g. -B^T lands via the same assembly loop as B.
struct BlockView {
  CsrMatrix* mat = nullptr;
  int row_offset = 0;
  int col_offset = 0;
  bool swap = false;
  double scale = 1.0;
  void add(int i, int j, double v) const {
    const int r = swap ? j : i;
    const int c = swap ? i : j;
    mat->add(r + row_offset, c + col_offset, scale * v);
  }
};

struct VectorView {
  std::span<double> data;
  int offset = 0;
  void add(int i, double v) const { data[i + offset] += v; }
};

// Quadrature-degree policy: 2p for mass/diffusion-type forms, 3p-1 (capped at
// the shipped maximum of 6) for convection-type forms.
int quad_degree_mass(int p);
int quad_degree_convection(int p);

/// Inserts the coupling pattern of two spaces (vector dofs) into a pattern.
void pattern_cells(SparsityPattern& sp, const FunctionSpace& test, const FunctionSpace& trial,
                   int row_offset, int col_offset);
/// Pattern entries added by facet (Robin) terms on the given tag.
void pattern_facets(SparsityPattern& sp, const FunctionSpace& space, int tag, int row_offset,
                    int col_offset);

/// Mass: out += integral of c(region) * phi_j . phi_i (per component when the
/// space is vector-valued).
void assemble_mass(const FunctionSpace& space, const RegionValue& coeff, const BlockView& out,
                   int quad_degree);

/// Diffusion: out += integral of c(region) * grad(phi_j) : grad(phi_i).
void assemble_diffusion(const FunctionSpace& space, const RegionValue& coeff, const BlockView& out,
                        int quad_degree);

/// Divergence coupling B(k, (a,c)) = integral of psi_k * d phi_a / d x_c over
/// the flow region. Rows: pressure space; columns: velocity vector dofs.
void assemble_divergence(const FunctionSpace& pressure, const FunctionSpace& velocity,
                         const BlockView& out);

/// Scalar advection (non-conservative form): out += integral of
/// rho_cp * (u . grad phi_j) phi_i, with the discrete velocity u evaluated in
/// `velocity`'s space; contributions only on flow cells.
void assemble_convection_scalar(const FunctionSpace& scalar, const FunctionSpace& velocity,
                                std::span<const double> u, double rho_cp, const BlockView& out,
                                int quad_degree);

/// Momentum advection about the state u: `advect` gets
/// rho * (u . grad phi_j) . phi_i; optionally `react` gets the linearization
/// remainder rho * (phi_j . grad u) . phi_i.
void assemble_convection_vector(const FunctionSpace& velocity, std::span<const double> u,
                                double rho, const BlockView& advect, const BlockView* react,
                                int quad_degree);

/// Buoyancy right-hand side as a coupling block plus constant load, so that
/// rhs_u = C * T + load0 equals the momentum load of -rho*beta*(T - T_ref)*g.
void assemble_buoyancy(const FunctionSpace& velocity, const FunctionSpace& temperature, double rho,
                       double beta, const double* gravity, double t_ref, const BlockView& c_out,
                       const VectorView& load0, int quad_degree);

/// Heat-equation velocity sensitivity D((i),(a,c)) = integral of
/// rho_cp * phi_a,c * dT/dx_c * phi_i at the frozen temperature state.
void assemble_heat_velocity_coupling(const FunctionSpace& scalar, const FunctionSpace& velocity,
                                     std::span<const double> temperature, double rho_cp,
                                     const BlockView& out, int quad_degree);

/// Volume load: rhs += integral of f(x) . phi_i (f fills `components` values).
void assemble_load(const FunctionSpace& space,
                   const std::function<void(const double*, double*)>& f, const VectorView& out,
                   int quad_degree);

/// Robin boundary term on facets with `tag`:
///   matrix += integral of h * phi_j phi_i ds
///   rhs    += integral of (h * t_ext - flux_offset) phi_i ds
/// i.e. the weak form of -k dT/dn = h (T - t_ext) + flux_offset.
void apply_robin(const FunctionSpace& space, int tag, double h, double t_ext, double flux_offset,
                 const BlockView& mat, const VectorView& rhs);

/// Evaluates the Robin fluxes of a discrete solution: returns the integral of
/// h (T - t_ext) + flux_offset over the tagged facets (outward positive).
double robin_flux(const FunctionSpace& space, std::span<const double> T, int tag, double h,
                  double t_ext, double flux_offset);

/// Row-replacement Dirichlet elimination on a standalone linear system.
/// `symmetric` also eliminates the columns (moving them to the rhs), which
/// preserves symmetry for SPD solves.
void apply_dirichlet(CsrMatrix& mat, std::span<double> rhs, std::span<const int> dofs,
                     std::span<const double> values, bool symmetric);

// --------------------------------------------------------------------------
// Discrete field evaluation helpers.
// --------------------------------------------------------------------------

/// Evaluates a coefficient field at a reference point of one cell.
void eval_field(const FunctionSpace& space, std::span<const double> coeffs, int cell,
                const double* ref_point, double* values, double* gradients /* may be null */);

/// L2 norm of (field - exact) over the space's support, `exact` filling
/// `components` values per point.
double l2_error(const FunctionSpace& space, std::span<const double> coeffs,
                const std::function<void(const double*, double*)>& exact, int quad_degree);

double l2_norm_field(const FunctionSpace& space, std::span<const double> coeffs, int quad_degree);

} // namespace ocuflow
