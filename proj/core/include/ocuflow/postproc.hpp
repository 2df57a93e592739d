#pragma once

#include <string>
#include <vector>

#include "ocuflow/coupled.hpp"

namespace ocuflow {

/// Converts a pressure in Pa to the display value in mmHg; `offset_mmhg` is a
/// pure additive shift (the absolute level of the enclosed chamber is gauged
/// to zero mean, the offset re-anchors it to a chosen reference).
double pressure_display_mmhg(double pa, double offset_mmhg);

/// Display gauge for solved pressures.  The momentum equation carries only
/// the buoyancy perturbation, so the solved p excludes the reference-density
/// hydrostatic head; physically the chamber pressure varies by rho*g*H over
/// its extent along gravity.  The gauge adds rho*(g . r) back and anchors the
/// fluid maximum at `offset_mmhg`, so the quoted baseline is the largest
/// display value in the chamber.
class PressureGauge {
public:
  PressureGauge(const CoupledProblem& problem, std::span<const double> x, double offset_mmhg);
  /// Total (perturbation + hydrostatic) pressure in Pa at point r.
  double total_pa(double solved_pa, const double* r) const {
    return solved_pa + rho_g_[0] * r[0] + rho_g_[1] * r[1];
  }
  double display_mmhg(double solved_pa, const double* r) const;
  double anchor_pa() const { return anchor_pa_; }

private:
  double rho_g_[2] = {0.0, 0.0};
  double anchor_pa_ = 0.0;
  double offset_mmhg_ = 0.0;
};

/// Writes the solution as legacy ASCII VTK (version 3.0): quadratic cells are
/// split into four linear triangles through the midside nodes, with point
/// data `velocity` (3 components, zero z), `pressure_mmHg` and
/// `temperature_K`, plus the region id as cell data.
void write_solution_vtk(const std::string& path, const CoupledProblem& problem,
                        std::span<const double> x, double pressure_offset_mmhg);
std::string solution_vtk_text(const CoupledProblem& problem, std::span<const double> x,
                              double pressure_offset_mmhg);

/// Structural lint of legacy-VTK text: header, counts, arity and finiteness.
/// Returns human-readable problems; empty means the file parses cleanly.
std::vector<std::string> validate_vtk_text(const std::string& text);

/// Stream function of the fluid velocity: -Laplace(psi) = curl(u) with
/// psi = 0 on every fluid wall, discretized on a scalar quadratic space over
/// the flow region.
struct StreamFunction {
  FunctionSpace space;
  std::vector<double> psi;
  double max_abs = 0.0;
};
StreamFunction stream_function(const FunctionSpace& velocity, std::span<const double> u);

/// Number of distinct recirculation cells: connected sign-consistent regions
/// of the stream function whose magnitude exceeds `threshold` * max|psi|.
int count_recirculations(const StreamFunction& sf, double threshold = 0.01);

struct ProbeSample {
  double s, x, y, t, umag, p_mmhg;
};

/// Samples fields along the segment a -> b (n points, endpoints included).
/// Velocity magnitude and pressure are zero outside the fluid.
std::vector<ProbeSample> probe_line(const CoupledProblem& problem, std::span<const double> x,
                                    const double* a, const double* b, int n,
                                    double pressure_offset_mmhg);
/// CSV with header `s,x,y,T_K,umag_mps,p_mmHg` and shortest round-trip
/// number formatting.
void write_probe_csv(const std::string& path, const std::vector<ProbeSample>& samples);
std::string probe_csv_text(const std::vector<ProbeSample>& samples);

struct FlowMetrics {
  double max_speed = 0.0;       ///< max |u| over nodes and quadrature points
  double t_min = 0.0, t_max = 0.0;
  double t_posterior_pole = 0.0; ///< T at the boundary vertex with smallest x
  double t_corneal_apex = 0.0;   ///< T at the exposed-surface vertex with largest x
  double p_span_mmhg = 0.0;      ///< (max - min) fluid pressure in mmHg
  double p_min_mmhg = 0.0, p_max_mmhg = 0.0; ///< display values (offset applied)
  int recirculation_count = 0;
  double mean_v_back = 0.0;  ///< area-average vertical velocity, posterior half
  double mean_v_front = 0.0; ///< area-average vertical velocity, anterior half
  double fluid_area = 0.0;
  double div_l2 = 0.0;            ///< L2 norm of the discrete divergence field
  double boundary_heat_net = 0.0; ///< net outward Robin flux [W per unit depth]
  double boundary_heat_scale = 0.0; ///< sum of |flux| per exchange surface
};

FlowMetrics compute_metrics(const CoupledProblem& problem, std::span<const double> x,
                            double pressure_offset_mmhg);

std::string metrics_text(const FlowMetrics& m);

} // namespace ocuflow
