#include "ocuflow/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace ocuflow {

namespace {
const std::string kRegionNames[region::count] = {
    "cornea", "aqueoushumor", "iris", "lens", "vitreous", "outershell"};
const std::string kBoundaryNames[boundary::count] = {
    "gamma_c", "gamma_i", "gamma_l", "gamma_vh", "gamma_sc", "gamma_body", "gamma_amb"};
const int kWallTags[5] = {boundary::GammaC, boundary::GammaI, boundary::GammaL,
                          boundary::GammaVH, boundary::GammaSc};
} // namespace

const std::string& region_name(int id) {
  if (id < 0 || id >= region::count) throw std::runtime_error("unknown region id");
  return kRegionNames[id];
}

const std::string& boundary_name(int id) {
  if (id < 0 || id >= boundary::count) throw std::runtime_error("unknown boundary id");
  return kBoundaryNames[id];
}

std::optional<int> region_id(const std::string& name) {
  for (int i = 0; i < region::count; ++i)
    if (kRegionNames[i] == name) return i;
  return std::nullopt;
}

std::optional<int> boundary_id(const std::string& name) {
  for (int i = 0; i < boundary::count; ++i)
    if (kBoundaryNames[i] == name) return i;
  return std::nullopt;
}

std::span<const int> fluid_wall_tags() { return {kWallTags, 5}; }

double Mesh::cell_volume(int c) const {
  const auto v = cell(c);
  if (dim == 2) {
    const double* a = &coords[(std::size_t)v[0] * 2];
    const double* b = &coords[(std::size_t)v[1] * 2];
    const double* d = &coords[(std::size_t)v[2] * 2];
    return 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
  }
  const double* p0 = &coords[(std::size_t)v[0] * 3];
  const double* p1 = &coords[(std::size_t)v[1] * 3];
  const double* p2 = &coords[(std::size_t)v[2] * 3];
  const double* p3 = &coords[(std::size_t)v[3] * 3];
  double m[9];
  for (int i = 0; i < 3; ++i) {
    m[i] = p1[i] - p0[i];
    m[3 + i] = p2[i] - p0[i];
    m[6 + i] = p3[i] - p0[i];
  }
  const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                     m[2] * (m[3] * m[7] - m[4] * m[6]);
  return det / 6.0;
}

namespace {

// sorted facet key (2 vertices in 2D, 3 in 3D)
std::array<int, 3> facet_key(std::span<const int> verts) {
  std::array<int, 3> k = {-1, -1, -1};
  for (std::size_t i = 0; i < verts.size(); ++i) k[3 - verts.size() + i] = verts[i];
  std::sort(k.begin() + (3 - verts.size()), k.end());
  return k;
}

} // namespace

std::vector<MeshViolation> mesh_validate(const Mesh& mesh) {
  std::vector<MeshViolation> out;
  const int nv = mesh.n_vertices();
  const int nc = mesh.n_cells();
  const int nf = mesh.n_facets();

  for (int c = 0; c < nc; ++c)
    for (int v : mesh.cell(c))
      if (v < 0 || v >= nv) {
        out.push_back({MeshViolation::IndexOutOfRange, c, "cell " + std::to_string(c) + " references vertex " + std::to_string(v)});
        return out; // nothing else is meaningful
      }
  for (int f = 0; f < nf; ++f)
    for (int v : mesh.facet(f))
      if (v < 0 || v >= nv) {
        out.push_back({MeshViolation::IndexOutOfRange, f, "facet " + std::to_string(f) + " references vertex " + std::to_string(v)});
        return out;
      }

  for (int c = 0; c < nc; ++c) {
    if (mesh.cell_region[c] < 0)
      out.push_back({MeshViolation::UnknownTag, c, "cell " + std::to_string(c) + " has negative region tag"});
    if (mesh.cell_volume(c) <= 0.0)
      out.push_back({MeshViolation::NonpositiveCellVolume, c,
                     "cell " + std::to_string(c) + " has nonpositive volume"});
  }
  for (int f = 0; f < nf; ++f)
    if (mesh.facet_tag[f] < 0 || mesh.facet_tag[f] >= boundary::count)
      out.push_back({MeshViolation::UnknownTag, f, "facet " + std::to_string(f) + " has unknown boundary tag"});

  bool has_fluid = false;
  for (int c = 0; c < nc; ++c)
    if (mesh.cell_region[c] == region::AqueousHumor) has_fluid = true;
  if (!has_fluid)
    out.push_back({MeshViolation::MissingFlowRegion, -1, "missing flow region (aqueoushumor)"});

  // facet -> incident cells, via sorted-vertex keys of every cell facet
  const int facets_per_cell = mesh.dim + 1;
  std::map<std::array<int, 3>, std::array<int, 2>> incidence; // key -> up to 2 cells
  for (int c = 0; c < nc; ++c) {
    const auto verts = mesh.cell(c);
    for (int lf = 0; lf < facets_per_cell; ++lf) {
      std::vector<int> fv;
      for (int i = 0; i < facets_per_cell; ++i)
        if (i != lf) fv.push_back(verts[i]);
      const auto key = facet_key(fv);
      auto it = incidence.find(key);
      if (it == incidence.end())
        incidence[key] = {c, -1};
      else if (it->second[1] < 0)
        it->second[1] = c;
      else
        out.push_back({MeshViolation::NonConforming, c,
                       "facet shared by more than two cells near cell " + std::to_string(c)});
    }
  }

  auto cells_of = [&](int f) -> std::array<int, 2> {
    const auto it = incidence.find(facet_key(mesh.facet(f)));
    if (it == incidence.end()) return {-1, -1};
    return it->second;
  };

  for (int f = 0; f < nf; ++f) {
    const auto cc = cells_of(f);
    const int tag = mesh.facet_tag[f];
    if (cc[0] < 0) {
      out.push_back({MeshViolation::NonConforming, f,
                     "tagged facet " + std::to_string(f) + " is not a facet of any cell"});
      continue;
    }
    const bool is_outer = cc[1] < 0;
    if (tag == boundary::GammaBody || tag == boundary::GammaAmb) {
      if (!is_outer)
        out.push_back({MeshViolation::NonConforming, f,
                       "outer-surface tag on interior facet " + std::to_string(f)});
    } else if (tag >= 0 && tag < boundary::count) {
      const bool touches_fluid =
          mesh.cell_region[cc[0]] == region::AqueousHumor ||
          (cc[1] >= 0 && mesh.cell_region[cc[1]] == region::AqueousHumor);
      if (!touches_fluid)
        out.push_back({MeshViolation::WallTagNotOnFluid, f,
                       "wall tag on facet " + std::to_string(f) + " not adjacent to the flow region"});
    }
  }

  // coverage: every outer-boundary facet must carry GammaBody or GammaAmb, and
  // every facet of the fluid boundary (outer or interface) must carry some tag
  std::map<std::array<int, 3>, int> tag_of;
  for (int f = 0; f < nf; ++f) tag_of[facet_key(mesh.facet(f))] = mesh.facet_tag[f];

  for (const auto& [key, cc] : incidence) {
    const bool outer = cc[1] < 0;
    const auto it = tag_of.find(key);
    const int tag = it == tag_of.end() ? -1 : it->second;
    if (outer && tag != boundary::GammaBody && tag != boundary::GammaAmb) {
      out.push_back({MeshViolation::OuterBoundaryNotCovered, cc[0],
                     "outer boundary facet near cell " + std::to_string(cc[0]) +
                         " not covered by gamma_body/gamma_amb"});
    }
    const bool fluid0 = mesh.cell_region[cc[0]] == region::AqueousHumor;
    const bool fluid1 = cc[1] >= 0 && mesh.cell_region[cc[1]] == region::AqueousHumor;
    const bool fluid_boundary = outer ? fluid0 : (fluid0 != fluid1);
    if (fluid_boundary && tag < 0)
      out.push_back({MeshViolation::FluidBoundaryUntagged, cc[0],
                     "untagged flow-region boundary facet near cell " + std::to_string(cc[0])});
  }

  return out;
}

Mesh mirror_x(const Mesh& mesh) {
  Mesh m = mesh;
  for (int v = 0; v < m.n_vertices(); ++v) m.coords[(std::size_t)v * m.dim] *= -1.0;
  // restore positive orientation
  for (int c = 0; c < m.n_cells(); ++c) {
    if (m.cell_volume(c) < 0.0)
      std::swap(m.cells[(std::size_t)c * (m.dim + 1) + 1], m.cells[(std::size_t)c * (m.dim + 1) + 2]);
  }
  return m;
}

} // namespace ocuflow
