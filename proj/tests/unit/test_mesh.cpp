#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ocuflow/eye_geometry.hpp"
#include "ocuflow/mesh.hpp"
#include "ocuflow/unit_meshes.hpp"

using namespace ocuflow;

TEST_CASE("unit square counts and tags") {
  const Mesh m = unit_square_mesh(1, 1);
  CHECK(m.n_vertices() == 4);
  CHECK(m.n_cells() == 2);
  CHECK(m.n_facets() == 4);
  for (int c = 0; c < m.n_cells(); ++c) {
    CHECK(m.cell_region[static_cast<size_t>(c)] == region::AqueousHumor);
    CHECK(m.cell_volume(c) == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK(mesh_validate(m).empty());

  SideTags tags;
  tags.left = boundary::GammaBody;
  tags.top = boundary::GammaC;
  const Mesh t = unit_square_mesh(3, 2, tags);
  int left = 0, top = 0;
  for (int f = 0; f < t.n_facets(); ++f) {
    if (t.facet_tag[static_cast<size_t>(f)] == boundary::GammaBody) ++left;
    if (t.facet_tag[static_cast<size_t>(f)] == boundary::GammaC) ++top;
  }
  CHECK(left == 2); // ny segments
  CHECK(top == 3);  // nx segments
}

TEST_CASE("jitter moves interior vertices only, reproducibly") {
  const Mesh a = unit_square_mesh(5, 5, {}, 0.2);
  const Mesh b = unit_square_mesh(5, 5, {}, 0.2);
  REQUIRE(a.coords.size() == b.coords.size());
  CHECK(std::equal(a.coords.begin(), a.coords.end(), b.coords.begin())); // bit-identical

  const Mesh plain = unit_square_mesh(5, 5);
  bool interior_moved = false;
  for (int v = 0; v < a.n_vertices(); ++v) {
    const double x = plain.coords[static_cast<size_t>(v) * 2];
    const double y = plain.coords[static_cast<size_t>(v) * 2 + 1];
    const bool on_boundary = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
    const double dx = a.coords[static_cast<size_t>(v) * 2] - x;
    const double dy = a.coords[static_cast<size_t>(v) * 2 + 1] - y;
    if (on_boundary) {
      CHECK(dx == 0.0);
      CHECK(dy == 0.0);
    } else if (dx != 0.0 || dy != 0.0) {
      interior_moved = true;
    }
  }
  CHECK(interior_moved);
  CHECK(mesh_validate(a).empty());
}

TEST_CASE("validator reports broken meshes") {
  Mesh m = unit_square_mesh(2, 2);

  SUBCASE("flipped cell") {
    std::swap(m.cells[0], m.cells[1]);
    const auto viol = mesh_validate(m);
    REQUIRE(!viol.empty());
    CHECK(std::any_of(viol.begin(), viol.end(), [](const MeshViolation& v) {
      return v.kind == MeshViolation::NonpositiveCellVolume;
    }));
  }
  SUBCASE("vertex index out of range") {
    m.cells[0] = 999;
    const auto viol = mesh_validate(m);
    REQUIRE(!viol.empty());
    CHECK(std::any_of(viol.begin(), viol.end(), [](const MeshViolation& v) {
      return v.kind == MeshViolation::IndexOutOfRange;
    }));
  }
  SUBCASE("unknown facet tag") {
    m.facet_tag[0] = 42;
    const auto viol = mesh_validate(m);
    REQUIRE(!viol.empty());
    CHECK(std::any_of(viol.begin(), viol.end(), [](const MeshViolation& v) {
      return v.kind == MeshViolation::UnknownTag;
    }));
  }
  SUBCASE("missing flow region") {
    for (auto& r : m.cell_region) r = region::Vitreous;
    const auto viol = mesh_validate(m);
    CHECK(std::any_of(viol.begin(), viol.end(), [](const MeshViolation& v) {
      return v.kind == MeshViolation::MissingFlowRegion;
    }));
  }
  SUBCASE("outer boundary not covered") {
    m.facets.erase(m.facets.begin(), m.facets.begin() + 2);
    m.facet_tag.erase(m.facet_tag.begin());
    const auto viol = mesh_validate(m);
    CHECK(std::any_of(viol.begin(), viol.end(), [](const MeshViolation& v) {
      return v.kind == MeshViolation::OuterBoundaryNotCovered ||
             v.kind == MeshViolation::FluidBoundaryUntagged;
    }));
  }
}

TEST_CASE("mirror preserves volumes, tags and validity") {
  EyeGeometry geo;
  geo.mesh_size = 1.2e-3; // coarse for speed
  const Mesh m = build_eye_mesh(geo);
  const Mesh mm = mirror_x(m);
  REQUIRE(mm.n_cells() == m.n_cells());
  REQUIRE(mm.n_facets() == m.n_facets());
  CHECK(mesh_validate(mm).empty());

  double vol = 0.0, mvol = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) {
    vol += m.cell_volume(c);
    mvol += mm.cell_volume(c);
    CHECK(mm.cell_volume(c) > 0.0);
  }
  CHECK(mvol == doctest::Approx(vol).epsilon(1e-13));

  std::multiset<int> tags(m.facet_tag.begin(), m.facet_tag.end());
  std::multiset<int> mtags(mm.facet_tag.begin(), mm.facet_tag.end());
  CHECK(tags == mtags);

  // Double mirror restores the exact coordinates.
  const Mesh back = mirror_x(mm);
  bool same = true;
  for (size_t i = 0; i < m.coords.size(); ++i)
    same = same && back.coords[i] == m.coords[i];
  CHECK(same);
}

TEST_CASE("tag name tables round-trip") {
  for (int r = 0; r < region::count; ++r) {
    const auto id = region_id(region_name(r));
    REQUIRE(id.has_value());
    CHECK(*id == r);
  }
  for (int b = 0; b < boundary::count; ++b) {
    const auto id = boundary_id(boundary_name(b));
    REQUIRE(id.has_value());
    CHECK(*id == b);
  }
  CHECK(!region_id("no_such_region").has_value());
  CHECK(!boundary_id("no_such_boundary").has_value());

  const auto walls = fluid_wall_tags();
  CHECK(walls.size() == 5);
  for (int tag : walls) {
    CHECK(tag != boundary::GammaBody);
    CHECK(tag != boundary::GammaAmb);
  }
}
