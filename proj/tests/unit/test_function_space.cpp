#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ocuflow/assembly.hpp"
#include "ocuflow/function_space.hpp"
#include "ocuflow/unit_meshes.hpp"

using namespace ocuflow;

TEST_CASE("dof counts on the two-triangle square") {
  const Mesh m = unit_square_mesh(1, 1);
  const FunctionSpace p1(m, 1, 1, SpaceSupport::Whole);
  const FunctionSpace p2(m, 2, 1, SpaceSupport::Whole);
  const FunctionSpace v2(m, 2, 2, SpaceSupport::Whole);
  CHECK(p1.n_dofs() == 4);  // vertices
  CHECK(p2.n_dofs() == 9);  // 4 vertices + 5 edges
  CHECK(v2.n_dofs() == 18); // vector-valued
  CHECK(p1.local_size() == 3);
  CHECK(p2.local_size() == 6);
}

TEST_CASE("dof numbering is deterministic across rebuilds") {
  const Mesh m = unit_square_mesh(4, 3, {}, 0.1);
  const FunctionSpace a(m, 2, 2, SpaceSupport::Whole);
  const FunctionSpace b(m, 2, 2, SpaceSupport::Whole);
  REQUIRE(a.n_dofs() == b.n_dofs());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto da = a.cell_dofs(c);
    const auto db = b.cell_dofs(c);
    CHECK(std::equal(da.begin(), da.end(), db.begin()));
  }
  bool coords_equal = a.dof_coords() == b.dof_coords();
  CHECK(coords_equal);
}

TEST_CASE("fluid-only support restricts to tagged cells") {
  // Mark the left half of a 4x2 grid as solid; the fluid space must ignore it.
  Mesh m = unit_square_mesh(4, 2);
  int fluid_cells = 0;
  for (int c = 0; c < m.n_cells(); ++c) {
    double cx = 0.0;
    for (int k = 0; k < 3; ++k) cx += m.vertex(m.cell(c)[k])[0] / 3.0;
    if (cx < 0.5) {
      m.cell_region[static_cast<size_t>(c)] = region::Cornea;
    } else {
      ++fluid_cells;
    }
  }
  const FunctionSpace whole(m, 1, 1, SpaceSupport::Whole);
  const FunctionSpace fluid(m, 1, 1, SpaceSupport::FluidOnly);
  CHECK(whole.n_dofs() == 15);
  CHECK(fluid.n_dofs() == 9); // right half vertices + interface column
  CHECK(static_cast<int>(fluid.active_cells().size()) == fluid_cells);
  for (int c : fluid.active_cells())
    CHECK(m.cell_region[static_cast<size_t>(c)] == region::AqueousHumor);
}

TEST_CASE("dofs_on_tags finds side dofs") {
  SideTags tags;
  tags.bottom = boundary::GammaBody;
  const Mesh m = unit_square_mesh(4, 4, tags);
  const FunctionSpace p2(m, 2, 1, SpaceSupport::Whole);
  const auto dofs = p2.dofs_on_tags(std::vector<int>{boundary::GammaBody});
  // Bottom side: 5 vertices + 4 edge midpoints.
  CHECK(dofs.size() == 9);
  for (int d : dofs)
    CHECK(p2.dof_coords()[static_cast<size_t>(d) * 2 + 1] == doctest::Approx(0.0));
  CHECK(std::is_sorted(dofs.begin(), dofs.end()));
}

TEST_CASE("interpolation and evaluation agree for in-space fields") {
  const Mesh m = unit_square_mesh(3, 3, {}, 0.08);
  const FunctionSpace p2(m, 2, 1, SpaceSupport::Whole);
  const auto f = [](const double* x, double* out) {
    out[0] = 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[0] * x[1];
  };
  const auto coeff = interpolate(p2, f);
  REQUIRE(static_cast<int>(coeff.size()) == p2.n_dofs());
  CHECK(l2_error(p2, coeff, f, quad_degree_convection(2)) <= 1e-13);

  // eval_field with gradients at a reference point of cell 0.
  const double ref[2] = {0.3, 0.3};
  double val = 0.0, grad[2] = {0.0, 0.0};
  eval_field(p2, coeff, p2.active_cells()[0], ref, &val, grad);
  // Gradient of f: (2 + y/2, -1 + x/2) at the mapped point; recover the
  // physical point from the P1 vertex map.
  const auto cell = m.cell(p2.active_cells()[0]);
  double xp = 0.0, yp = 0.0;
  const double l0 = 1.0 - ref[0] - ref[1];
  const double lam[3] = {l0, ref[0], ref[1]};
  for (int k = 0; k < 3; ++k) {
    xp += lam[k] * m.vertex(cell[k])[0];
    yp += lam[k] * m.vertex(cell[k])[1];
  }
  double expect = 0.0;
  f(std::array<double, 2>{xp, yp}.data(), &expect);
  CHECK(val == doctest::Approx(expect).epsilon(1e-12));
  CHECK(grad[0] == doctest::Approx(2.0 + 0.5 * yp).epsilon(1e-11));
  CHECK(grad[1] == doctest::Approx(-1.0 + 0.5 * xp).epsilon(1e-11));
}

TEST_CASE("l2 norm of an interpolated constant") {
  const Mesh m = unit_square_mesh(5, 5);
  const FunctionSpace p1(m, 1, 1, SpaceSupport::Whole);
  const std::vector<double> c(static_cast<size_t>(p1.n_dofs()), 3.0);
  CHECK(l2_norm_field(p1, c, 2) == doctest::Approx(3.0).epsilon(1e-13));
}
