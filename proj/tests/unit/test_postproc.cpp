// Post-processing: pressure display gauge, VTK writer + lint, stream
// function, line probes and scalar metrics.

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ocuflow/coupled.hpp"
#include "ocuflow/postproc.hpp"
#include "ocuflow/unit_meshes.hpp"

using namespace ocuflow;

namespace {

Mesh walled_mesh(int n) {
  SideTags tags;
  tags.left = boundary::GammaC;
  tags.right = boundary::GammaI;
  tags.top = boundary::GammaSc;
  tags.bottom = boundary::GammaSc;
  return unit_square_mesh(n, n, tags);
}

PhysicalParams unit_solids() {
  PhysicalParams p;
  p.mu = 1.0;
  p.rho = 1.0;
  p.cp = 1.0;
  p.beta = 1.0;
  p.k_ah = 1.0;
  p.g = 0.0;
  p.t_ref = 0.0;
  p.k_cornea = p.k_iris = p.k_lens = p.k_vitreous = p.k_outershell = 1.0;
  return p;
}

/// Fills a full state vector from per-field interpolants (no solve).
std::vector<double> craft_state(const CoupledProblem& prob,
                                const std::function<void(const double*, double*)>& u_fn,
                                const std::function<void(const double*, double*)>& p_fn,
                                const std::function<void(const double*, double*)>& t_fn) {
  std::vector<double> x(static_cast<size_t>(prob.size()), 0.0);
  const auto u = interpolate(prob.velocity_space(), u_fn);
  const auto p = interpolate(prob.pressure_space(), p_fn);
  const auto t = interpolate(prob.temperature_space(), t_fn);
  std::copy(u.begin(), u.end(), x.begin());
  std::copy(p.begin(), p.end(), x.begin() + prob.layout().p_offset());
  std::copy(t.begin(), t.end(), x.begin() + prob.layout().t_offset());
  return x;
}

} // namespace

TEST_CASE("pressure unit conversion") {
  CHECK(kPascalPerMmHg == 133.322);
  CHECK(pressure_display_mmhg(0.0, 15.5) == 15.5);
  CHECK(pressure_display_mmhg(133.322, 15.5) == doctest::Approx(16.5).epsilon(1.0e-12));
  // A 6 mm water column: rho g h = 1000 * 9.81 * 0.006 Pa = 0.4415 mmHg.
  CHECK(pressure_display_mmhg(1000.0 * 9.81 * 0.006, 0.0) ==
        doctest::Approx(0.441487).epsilon(1.0e-4));
}

TEST_CASE("pressure gauge reconstructs the hydrostatic head and anchors the fluid maximum") {
  const Mesh mesh = unit_square_mesh(4, 4);
  PhysicalParams params = unit_solids();
  params.rho = 2.0;
  params.g = 3.0; // standing: rho * g = (0, -6)
  CoupledProblem prob(mesh, params, Posture::Standing);

  std::vector<double> x(static_cast<size_t>(prob.size()), 0.0);
  const auto p = interpolate(prob.pressure_space(),
                             [](const double* r, double* o) { o[0] = r[0]; });
  std::copy(p.begin(), p.end(), x.begin() + prob.layout().p_offset());

  const PressureGauge gauge(prob, x, 10.0);
  // total = p + rho g . r = x - 6 y; its maximum over [0,1]^2 sits at (1, 0).
  CHECK(gauge.anchor_pa() == doctest::Approx(1.0).epsilon(1.0e-12));
  const double r[2] = {0.5, 0.5};
  CHECK(gauge.total_pa(2.0, r) == doctest::Approx(-1.0).epsilon(1.0e-12));
  CHECK(gauge.display_mmhg(2.0, r) ==
        doctest::Approx(10.0 - 2.0 / kPascalPerMmHg).epsilon(1.0e-12));
  // The anchor point itself displays exactly the offset.
  const double top[2] = {1.0, 0.0};
  CHECK(gauge.display_mmhg(1.0, top) == doctest::Approx(10.0).epsilon(1.0e-12));
}

TEST_CASE("vtk writer produces lintable output and the lint catches damage") {
  const Mesh mesh = walled_mesh(4);
  CoupledProblem prob(mesh, unit_solids(), Posture::Standing);
  const auto x = craft_state(
      prob, [](const double*, double* o) { o[0] = 1.0; o[1] = 2.0; },
      [](const double*, double* o) { o[0] = 0.0; },
      [](const double*, double* o) { o[0] = 300.0; });

  const std::string text = solution_vtk_text(prob, x, 15.5);
  CHECK(validate_vtk_text(text).empty());
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("POINTS 81 double") != std::string::npos); // 4x4 grid, quadratic nodes
  CHECK(text.find("VECTORS velocity double") != std::string::npos);
  CHECK(text.find("SCALARS pressure_mmHg double 1") != std::string::npos);
  CHECK(text.find("SCALARS temperature_K double 1") != std::string::npos);
  CHECK(text.find("SCALARS region int 1") != std::string::npos);

  SUBCASE("wrong point count") {
    std::string bad = text;
    bad.replace(bad.find("POINTS 81"), 9, "POINTS 90");
    CHECK_FALSE(validate_vtk_text(bad).empty());
  }
  SUBCASE("non-finite value") {
    std::string bad = text;
    const size_t pos = bad.find("300\n");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 3, "nan");
    CHECK_FALSE(validate_vtk_text(bad).empty());
  }
  SUBCASE("truncated file") {
    CHECK_FALSE(validate_vtk_text(text.substr(0, text.size() / 2)).empty());
  }
}

TEST_CASE("stream function recovers a manufactured vortex") {
  const Mesh mesh = walled_mesh(12);
  const FunctionSpace velocity(mesh, 2, 2, SpaceSupport::FluidOnly);

  SUBCASE("single cell from psi = x(1-x)y(1-y)") {
    // u = (psi_y, -psi_x) is divergence-free and no-slip-compatible.
    const auto u = interpolate(velocity, [](const double* r, double* o) {
      const double x = r[0], y = r[1];
      o[0] = x * (1.0 - x) * (1.0 - 2.0 * y);
      o[1] = -(1.0 - 2.0 * x) * y * (1.0 - y);
    });
    const StreamFunction sf = stream_function(velocity, u);
    CHECK(sf.max_abs == doctest::Approx(1.0 / 16.0).epsilon(0.05));
    CHECK(count_recirculations(sf) == 1);
  }

  SUBCASE("two counter-rotating cells") {
    // psi = (x - 3x^2 + 2x^3) y(1-y) changes sign across x = 1/2.
    const auto u = interpolate(velocity, [](const double* r, double* o) {
      const double x = r[0], y = r[1];
      o[0] = (x - 3.0 * x * x + 2.0 * x * x * x) * (1.0 - 2.0 * y);
      o[1] = -(1.0 - 6.0 * x + 6.0 * x * x) * y * (1.0 - y);
    });
    const StreamFunction sf = stream_function(velocity, u);
    CHECK(count_recirculations(sf) == 2);
  }

  SUBCASE("fluid at rest has no cells") {
    const std::vector<double> u(static_cast<size_t>(velocity.n_dofs()), 0.0);
    const StreamFunction sf = stream_function(velocity, u);
    CHECK(sf.max_abs == 0.0);
    CHECK(count_recirculations(sf) == 0);
  }
}

TEST_CASE("line probe reports fields in the fluid and zeros in solids") {
  // Left half of the square is solid (cornea), right half fluid.
  Mesh mesh = unit_square_mesh(4, 4);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto cv = mesh.cell(c);
    const double cx =
        (mesh.vertex(cv[0])[0] + mesh.vertex(cv[1])[0] + mesh.vertex(cv[2])[0]) / 3.0;
    if (cx < 0.5)
      mesh.cell_region[static_cast<size_t>(c)] = region::Cornea;
  }
  CoupledProblem prob(mesh, unit_solids(), Posture::Standing);
  const auto x = craft_state(
      prob, [](const double*, double* o) { o[0] = 0.6; o[1] = 0.8; },
      [](const double*, double* o) { o[0] = 7.0; },
      [](const double* r, double* o) { o[0] = 300.0 + 10.0 * r[0]; });

  const double a[2] = {0.05, 0.5};
  const double b[2] = {0.85, 0.5};
  const auto samples = probe_line(prob, x, a, b, 5, 15.5);
  REQUIRE(samples.size() == 5);
  for (int i = 0; i < 5; ++i) {
    const auto& s = samples[static_cast<size_t>(i)];
    const double f = i / 4.0;
    CHECK(s.s == doctest::Approx(f * 0.8).epsilon(1.0e-12));
    CHECK(s.x == doctest::Approx(0.05 + f * 0.8).epsilon(1.0e-12));
    CHECK(s.y == 0.5);
    CHECK(s.t == doctest::Approx(300.0 + 10.0 * s.x).epsilon(1.0e-10));
    if (s.x < 0.5) { // solid: velocity and pressure are not defined
      CHECK(s.umag == 0.0);
      CHECK(s.p_mmhg == 0.0);
    } else { // fluid: |u| = 1, uniform pressure displays as the offset
      CHECK(s.umag == doctest::Approx(1.0).epsilon(1.0e-10));
      CHECK(s.p_mmhg == doctest::Approx(15.5).epsilon(1.0e-10));
    }
  }

  const std::string csv = probe_csv_text(samples);
  CHECK(csv.rfind("s,x,y,T_K,umag_mps,p_mmHg\n", 0) == 0);
  // header + one line per sample, each with six comma-separated numbers
  size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n')
      ++lines;
  CHECK(lines == 6);
  const std::string row = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1));
  size_t commas = 0;
  for (char ch : row)
    if (ch == ',')
      ++commas;
  CHECK(commas == 5);

  CHECK_THROWS(probe_line(prob, x, a, b, 1, 15.5));
}

TEST_CASE("metrics on a crafted state reproduce closed-form values") {
  const Mesh mesh = unit_square_mesh(4, 4); // all sides ambient-tagged
  PhysicalParams params = unit_solids();    // g = 0: pressure display is pure offset
  CoupledProblem prob(mesh, params, Posture::Standing);
  const auto x = craft_state(
      prob, [](const double*, double* o) { o[0] = 0.6; o[1] = 0.8; },
      [](const double* r, double* o) { o[0] = r[0]; },
      [](const double* r, double* o) { o[0] = 300.0 + 10.0 * r[0]; });

  const FlowMetrics m = compute_metrics(prob, x, 15.5);
  CHECK(m.max_speed == doctest::Approx(1.0).epsilon(1.0e-12));
  CHECK(m.t_min == doctest::Approx(300.0));
  CHECK(m.t_max == doctest::Approx(310.0));
  CHECK(m.t_posterior_pole == doctest::Approx(300.0)); // vertex (0, 0)
  CHECK(m.t_corneal_apex == doctest::Approx(310.0));   // vertex (1, 0)
  CHECK(m.p_span_mmhg == doctest::Approx(1.0 / kPascalPerMmHg).epsilon(1.0e-10));
  CHECK(m.p_max_mmhg == doctest::Approx(15.5).epsilon(1.0e-10));
  CHECK(m.p_min_mmhg == doctest::Approx(15.5 - 1.0 / kPascalPerMmHg).epsilon(1.0e-10));
  CHECK(m.recirculation_count == 0); // uniform flow has zero vorticity
  CHECK(m.mean_v_back == doctest::Approx(0.8).epsilon(1.0e-12));
  CHECK(m.mean_v_front == doctest::Approx(0.8).epsilon(1.0e-12));
  CHECK(m.fluid_area == doctest::Approx(1.0).epsilon(1.0e-12));
  CHECK(m.div_l2 <= 1.0e-12);

  // Default exchanges: blood side has no tagged facets here, the ambient side
  // wraps the whole square.  With T = 300 + 10x, h = 16, T_ext = 307 and a
  // 40 W/m^2 offset the net outward flux is -112 + 48 - 32 - 32 + 4*40 = 32.
  CHECK(m.boundary_heat_net == doctest::Approx(32.0).epsilon(1.0e-10));
  CHECK(m.boundary_heat_scale == doctest::Approx(32.0).epsilon(1.0e-10));

  const std::string txt = metrics_text(m);
  for (const char* key :
       {"max_speed_mps = ", "t_min_K = ", "t_max_K = ", "t_posterior_pole_K = ",
        "t_corneal_apex_K = ", "p_span_mmHg = ", "p_min_mmHg = ", "p_max_mmHg = ",
        "recirculation_count = ", "mean_v_back_mps = ", "mean_v_front_mps = ",
        "fluid_area_m2 = ", "div_l2 = ", "boundary_heat_net_W = ", "boundary_heat_scale_W = "})
    CHECK(txt.find(key) != std::string::npos);
}

TEST_CASE("metrics on a solved buoyant box show one warm-side-up cell") {
  SideTags tags;
  tags.left = boundary::GammaC;
  tags.right = boundary::GammaI;
  tags.top = boundary::GammaSc;
  tags.bottom = boundary::GammaSc;
  const Mesh mesh = unit_square_mesh(8, 8, tags);

  PhysicalParams params = unit_solids();
  params.mu = 0.71;                 // Pr = 0.71
  params.g = 1000.0 * params.mu;    // Ra = 1e3
  CoupledOptions opt;
  opt.lin_rtol = 1.0e-10;
  opt.newton.rtol = 1.0e-10;
  CoupledProblem prob(mesh, params, Posture::Standing, opt);
  prob.clear_robin();
  prob.set_velocity_dirichlet({boundary::GammaC, boundary::GammaI, boundary::GammaSc},
                              [](const double*, double* o) { o[0] = o[1] = 0.0; });
  prob.add_temperature_dirichlet({boundary::GammaC}, [](const double*, double* o) { o[0] = 1.0; });
  prob.add_temperature_dirichlet({boundary::GammaI}, [](const double*, double* o) { o[0] = 0.0; });

  std::vector<double> x;
  REQUIRE(prob.solve(x).converged);
  const FlowMetrics m = compute_metrics(prob, x, 0.0);

  CHECK(m.recirculation_count == 1);
  // Hot left wall: fluid rises on the left (back) half, sinks on the right.
  CHECK(m.mean_v_back > 0.0);
  CHECK(m.mean_v_front < 0.0);
  CHECK(m.t_min == doctest::Approx(0.0).epsilon(1.0e-9));
  CHECK(m.t_max == doctest::Approx(1.0).epsilon(1.0e-9));
  CHECK(m.max_speed > 1.0); // diffusion-scaled peak ~3.7 at this Rayleigh number
  CHECK(m.max_speed < 10.0);
  CHECK(m.fluid_area == doctest::Approx(1.0).epsilon(1.0e-12));
  CHECK(m.div_l2 < 0.05 * m.max_speed);
}
