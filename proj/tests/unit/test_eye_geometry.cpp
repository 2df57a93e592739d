#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ocuflow/eye_geometry.hpp"

using namespace ocuflow;

namespace {

EyeGeometry coarse() {
  EyeGeometry geo;
  geo.mesh_size = 1.0e-3;
  return geo;
}

} // namespace

TEST_CASE("geometry validation catches inconsistent dimensions") {
  CHECK_NOTHROW(coarse().validate());

  EyeGeometry g = coarse();
  g.pupil_half_height = g.lens_half_height + 1e-4; // pupil taller than lens
  CHECK_THROWS(g.validate());

  g = coarse();
  g.chamber_half_height = 0.5 * g.height; // chamber reaches the outer surface
  CHECK_THROWS(g.validate());

  g = coarse();
  g.ac_width = -1.0;
  CHECK_THROWS(g.validate());

  g = coarse();
  g.ambient_strip = g.height; // strip beyond the cross-section
  CHECK_THROWS(g.validate());
}

TEST_CASE("derived extents") {
  const EyeGeometry g = coarse();
  CHECK(g.ah_axial_extent() ==
        doctest::Approx(g.pc_width + g.iris_width + g.ac_width + g.cornea_bulge));
  CHECK(g.ah_vertical_extent() == doctest::Approx(2.0 * g.chamber_half_height));
  CHECK(g.axial_length() > g.vitreous_width);
}

TEST_CASE("built mesh carries every region and tag and passes validation") {
  const Mesh m = build_eye_mesh(coarse());
  CHECK(mesh_validate(m).empty());

  std::set<int> regions(m.cell_region.begin(), m.cell_region.end());
  for (int r = 0; r < region::count; ++r)
    CHECK(regions.count(r) == 1);

  std::set<int> tags(m.facet_tag.begin(), m.facet_tag.end());
  for (int b = 0; b < boundary::count; ++b)
    CHECK(tags.count(b) == 1);
}

TEST_CASE("fluid area matches the parametric formula") {
  const EyeGeometry g = coarse();
  const Mesh m = build_eye_mesh(g);
  double area = 0.0;
  for (int c = 0; c < m.n_cells(); ++c)
    if (m.cell_region[static_cast<size_t>(c)] == region::AqueousHumor)
      area += m.cell_volume(c);
  // The parabolic chamber front is interpolated by straight facets, so allow
  // a sliver of discretization error.
  CHECK(area == doctest::Approx(g.ah_area()).epsilon(5e-3));
}

TEST_CASE("cross-section is symmetric about the axis") {
  const Mesh m = build_eye_mesh(coarse());
  std::map<std::pair<long long, long long>, int> count;
  const auto key = [](double x, double y) {
    return std::make_pair(static_cast<long long>(std::llround(x * 1e12)),
                          static_cast<long long>(std::llround(y * 1e12)));
  };
  for (int v = 0; v < m.n_vertices(); ++v)
    count[key(m.vertex(v)[0], m.vertex(v)[1])]++;
  for (int v = 0; v < m.n_vertices(); ++v)
    CHECK(count.count(key(m.vertex(v)[0], -m.vertex(v)[1])) == 1);
}

TEST_CASE("refinement scales the cell count") {
  EyeGeometry g = coarse();
  const Mesh c = build_eye_mesh(g);
  g.mesh_size = 5.0e-4;
  const Mesh f = build_eye_mesh(g);
  CHECK(f.n_cells() > 3 * c.n_cells()); // ~4x for a 2x refinement
  CHECK(mesh_validate(f).empty());
}
