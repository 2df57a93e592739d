#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "ocuflow/eye_geometry.hpp"
#include "ocuflow/mesh_io.hpp"
#include "ocuflow/unit_meshes.hpp"

using namespace ocuflow;

TEST_CASE("msh round-trip on the eye mesh") {
  EyeGeometry geo;
  geo.mesh_size = 1.5e-3;
  const Mesh m = build_eye_mesh(geo);

  std::ostringstream out;
  print_msh(m, out);
  std::istringstream in(out.str());
  const Mesh r = parse_msh(in);

  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.n_facets() == m.n_facets());
  CHECK(r.cell_region == m.cell_region);
  CHECK(r.facet_tag == m.facet_tag);
  CHECK(r.cells == m.cells);
  CHECK(r.facets == m.facets);
  // Shortest round-trip formatting must reproduce coordinates exactly.
  bool coords_same = true;
  for (size_t i = 0; i < m.coords.size(); ++i)
    coords_same = coords_same && r.coords[i] == m.coords[i];
  CHECK(coords_same);
  CHECK(mesh_validate(r).empty());
}

TEST_CASE("msh file io") {
  const Mesh m = unit_square_mesh(2, 3);
  const std::string path = "unit_square_io_test.msh";
  write_msh(m, path);
  const Mesh r = read_msh(path);
  CHECK(r.n_vertices() == m.n_vertices());
  CHECK(r.cells == m.cells);
  CHECK(r.facet_tag == m.facet_tag);
  std::remove(path.c_str());
  CHECK_THROWS(read_msh("definitely_missing_file.msh"));
}

TEST_CASE("msh parser rejects unknown physical names") {
  const char* text = R"($MeshFormat
4.1 0 8
$EndMeshFormat
$PhysicalNames
1
2 1 "middle_earth"
$EndPhysicalNames
$Entities
0 0 1 0
1 0 0 0 1 1 0 1 1 0
$EndEntities
$Nodes
1 3 1 3
2 1 0 3
1
2
3
0 0 0
1 0 0
0 1 0
$EndNodes
$Elements
1 1 1 1
2 1 2 1
1 1 2 3
$EndElements
)";
  std::istringstream in(text);
  CHECK_THROWS(parse_msh(in));
}

TEST_CASE("msh parser rejects non-simplex elements") {
  const char* text = R"($MeshFormat
4.1 0 8
$EndMeshFormat
$PhysicalNames
1
2 1 "aqueoushumor"
$EndPhysicalNames
$Entities
0 0 1 0
1 0 0 0 1 1 0 1 1 0
$EndEntities
$Nodes
1 4 1 4
2 1 0 4
1
2
3
4
0 0 0
1 0 0
1 1 0
0 1 0
$EndNodes
$Elements
1 1 1 1
2 1 3 1
1 1 2 3 4
$EndElements
)";
  std::istringstream in(text);
  CHECK_THROWS(parse_msh(in)); // element type 3 = 4-node quadrangle
}
