#pragma once

#include <functional>
#include <map>
#include <optional>

#include "ocuflow/assembly.hpp"
#include "ocuflow/block_system.hpp"
#include "ocuflow/function_space.hpp"
#include "ocuflow/newton.hpp"
#include "ocuflow/physics.hpp"

namespace ocuflow {

struct CoupledOptions {
  double lin_rtol = 1.0e-8; ///< outer flexible-GMRES tolerance per Newton step
  int gmres_restart = 100;
  int gmres_max_iter = 500;
  BlockPrecondOptions precond;
  NewtonOptions newton;
};

/// Steady buoyancy-driven flow in the fluid region coupled to heat transport
/// over the whole domain. Unknowns are ordered
/// [ velocity | pressure | gauge | temperature ]; the gauge multiplier pins
/// the mean pressure of the enclosed chamber.
///
/// Defaults model the physical configuration: no-slip on every fluid wall,
/// blood-side Robin exchange on the body boundary and
/// convection+radiation+evaporation on the exposed surface. The Dirichlet,
/// Robin and forcing hooks reconfigure the same operator for manufactured
/// solutions and benchmark cavities.
class CoupledProblem : public NewtonProblem {
public:
  using SpatialFn = std::function<void(const double* x, double* out)>;

  CoupledProblem(const Mesh& mesh, const PhysicalParams& params, Posture posture,
                 CoupledOptions opt = {});

  struct RobinSet {
    int tag;
    double h, t_ext, flux_offset;
  };

  // ---- configuration (before the first residual/jacobian call) ----
  /// Replaces the default no-slip walls: velocity Dirichlet on `tags`.
  void set_velocity_dirichlet(std::vector<int> tags, SpatialFn value);
  /// Adds a temperature Dirichlet condition on `tags`.
  void add_temperature_dirichlet(std::vector<int> tags, SpatialFn value);
  /// Drops the default Robin exchanges (body + ambient).
  void clear_robin();
  void add_robin(int tag, double h, double t_ext, double flux_offset);
  void set_momentum_forcing(SpatialFn f); ///< two components
  void set_heat_forcing(SpatialFn f);     ///< one component

  // ---- NewtonProblem ----
  int size() const override { return layout_.total(); }
  void residual(std::span<const double> x, std::span<double> r) override;
  void solve_jacobian(std::span<const double> x, std::span<const double> rhs,
                      std::span<double> dx) override;

  /// Conduction-only start: u = p = 0 and T from the linear heat problem.
  std::vector<double> initial_guess();
  /// Newton path: initial guess, then damped Newton with the class options.
  NewtonReport solve(std::vector<double>& x);

  // ---- introspection ----
  const Mesh& mesh() const { return mesh_; }
  const std::vector<RobinSet>& robin_conditions() const { return robin_; }
  const SystemLayout& layout() const { return layout_; }
  const FunctionSpace& velocity_space() const { return v_; }
  const FunctionSpace& pressure_space() const { return q_; }
  const FunctionSpace& temperature_space() const { return s_; }
  const PhysicalParams& params() const { return params_; }
  std::array<double, 2> gravity() const { return gravity_; }

  std::span<const double> u_part(std::span<const double> x) const;
  std::span<const double> p_part(std::span<const double> x) const;
  std::span<const double> t_part(std::span<const double> x) const;
  double lambda_part(std::span<const double> x) const;

  /// Assembles and returns the Jacobian at x (also used internally).
  const CsrMatrix& assemble_jacobian(std::span<const double> x);
  const CsrMatrix& divergence_matrix() const { return b_; }
  std::span<const double> gauge_vector() const { return m_; }
  const GmresResult& last_linear() const { return last_linear_; }
  long last_inner_iterations() const { return last_inner_iters_; }
  long last_inner_u() const { return last_inner_u_; }
  long last_inner_p() const { return last_inner_p_; }
  long last_inner_t() const { return last_inner_t_; }

private:
  void finalize();
  void collect_dirichlet();

  const Mesh& mesh_;
  PhysicalParams params_;
  std::array<double, 2> gravity_;
  CoupledOptions opt_;
  FunctionSpace v_, q_, s_;
  SystemLayout layout_;

  struct DirichletSet {
    std::vector<int> tags;
    SpatialFn value;
  };
  std::vector<DirichletSet> velocity_bc_;
  std::vector<DirichletSet> temperature_bc_;
  std::vector<RobinSet> robin_;
  SpatialFn momentum_forcing_;
  SpatialFn heat_forcing_;

  bool finalized_ = false;
  std::map<int, double> dirichlet_; // global row -> value
  std::vector<int> dirichlet_rows_;
  std::vector<double> dirichlet_values_;

  CsrMatrix a_visc_;  // mu * velocity stiffness
  CsrMatrix b_;       // divergence (pressure rows x velocity cols)
  CsrMatrix c_buoy_;  // velocity rows x temperature cols
  CsrMatrix k_heat_;  // conductivity + Robin
  CsrMatrix n_adv_;   // momentum convection at the current state
  CsrMatrix n_heat_;  // heat convection at the current state
  CsrMatrix mp_, ap_; // pressure mass / stiffness (Schur operators)
  CsrMatrix jac_;
  std::vector<double> k_table_;   // conductivity per region id
  std::vector<double> m_;         // pressure gauge vector (cell masses)
  std::vector<double> const_rhs_; // buoyancy offset + Robin + forcing loads
  GmresResult last_linear_;
  long last_inner_iters_ = 0;
  long last_inner_u_ = 0;
  long last_inner_p_ = 0;
  long last_inner_t_ = 0;
};

} // namespace ocuflow
