#include "ocuflow/unit_meshes.hpp"

#include <random>
#include <stdexcept>

namespace ocuflow {

Mesh unit_square_mesh(int nx, int ny, SideTags tags, double jitter) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("unit square needs at least one cell per direction");
  if (jitter < 0.0 || jitter >= 0.5)
    throw std::invalid_argument("jitter must lie in [0, 0.5)");

  Mesh mesh;
  mesh.dim = 2;
  std::minstd_rand rng(12345);
  std::uniform_real_distribution<double> shift(-jitter, jitter);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      double x = static_cast<double>(i) / nx;
      double y = static_cast<double>(j) / ny;
      if (jitter > 0.0) {
        // Draw for every vertex so the point set does not depend on which
        // vertices are interior.
        const double dx = shift(rng) / nx;
        const double dy = shift(rng) / ny;
        if (i > 0 && i < nx && j > 0 && j < ny) {
          x += dx;
          y += dy;
        }
      }
      mesh.coords.push_back(x);
      mesh.coords.push_back(y);
    }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      mesh.cells.insert(mesh.cells.end(), {v00, v10, v11});
      mesh.cells.insert(mesh.cells.end(), {v00, v11, v01});
      mesh.cell_region.push_back(region::AqueousHumor);
      mesh.cell_region.push_back(region::AqueousHumor);
    }
  const auto add_facet = [&](int a, int b, int tag) {
    mesh.facets.push_back(a);
    mesh.facets.push_back(b);
    mesh.facet_tag.push_back(tag);
  };
  for (int j = 0; j < ny; ++j) {
    add_facet(vid(0, j), vid(0, j + 1), tags.left);
    add_facet(vid(nx, j), vid(nx, j + 1), tags.right);
  }
  for (int i = 0; i < nx; ++i) {
    add_facet(vid(i, 0), vid(i + 1, 0), tags.bottom);
    add_facet(vid(i, ny), vid(i + 1, ny), tags.top);
  }
  return mesh;
}

} // namespace ocuflow
