#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ocuflow {

// ----------------------------------------------------------------------------
// Region and boundary tags. The named constants cover the eye cross-section;
// additional named regions can be supplied to the readers as an extension map.
// ----------------------------------------------------------------------------
namespace region {
inline constexpr int Cornea = 0;
inline constexpr int AqueousHumor = 1;
inline constexpr int Iris = 2;
inline constexpr int Lens = 3;
inline constexpr int Vitreous = 4;
inline constexpr int OuterShell = 5;
inline constexpr int count = 6;
} // namespace region

namespace boundary {
inline constexpr int GammaC = 0;   // aqueous humor / cornea wall
inline constexpr int GammaI = 1;   // aqueous humor / iris wall
inline constexpr int GammaL = 2;   // aqueous humor / lens wall
inline constexpr int GammaVH = 3;  // aqueous humor / vitreous wall
inline constexpr int GammaSc = 4;  // aqueous humor / outer shell wall
inline constexpr int GammaBody = 5;  // outer surface facing the body core
inline constexpr int GammaAmb = 6;   // outer surface exposed to ambient air
inline constexpr int count = 7;
} // namespace boundary

const std::string& region_name(int id);
const std::string& boundary_name(int id);
std::optional<int> region_id(const std::string& name);
std::optional<int> boundary_id(const std::string& name);

/// No-slip wall set enclosing the aqueous humor.
std::span<const int> fluid_wall_tags();

// ----------------------------------------------------------------------------
// Simplex mesh. Cells are triangles (dim 2) or tetrahedra (dim 3) with
// positive orientation. `facets` holds only the *tagged* facets: outer
// boundary pieces (GammaBody/GammaAmb) and fluid-wall interfaces, which in a
// conjugate configuration are interior facets between the aqueous humor and
// the surrounding solids.
// ----------------------------------------------------------------------------
struct Mesh {
  int dim = 2;
  std::vector<double> coords;   // dim * n_vertices, interleaved
  std::vector<int> cells;       // (dim+1) * n_cells
  std::vector<int> cell_region; // region id per cell
  std::vector<int> facets;      // dim * n_facets, vertex ids
  std::vector<int> facet_tag;   // boundary id per facet

  int n_vertices() const { return dim == 0 ? 0 : (int)(coords.size() / dim); }
  int n_cells() const { return dim == 0 ? 0 : (int)(cells.size() / (dim + 1)); }
  int n_facets() const { return dim == 0 ? 0 : (int)(facets.size() / dim); }

  std::span<const int> cell(int c) const { return {cells.data() + (std::size_t)c * (dim + 1), (std::size_t)dim + 1}; }
  std::span<const int> facet(int f) const { return {facets.data() + (std::size_t)f * dim, (std::size_t)dim}; }
  std::span<const double> vertex(int v) const { return {coords.data() + (std::size_t)v * dim, (std::size_t)dim}; }

  double cell_volume(int c) const; // signed area (2D) / volume (3D)
};

struct MeshViolation {
  enum Kind {
    IndexOutOfRange,
    NonpositiveCellVolume,
    NonConforming,
    UnknownTag,
    MissingFlowRegion,
    OuterBoundaryNotCovered,
    WallTagNotOnFluid,
    FluidBoundaryUntagged,
  };
  Kind kind;
  int index; // offending cell/facet/vertex, or -1
  std::string message;
};

/// Structural diagnostics; an empty result means the mesh is fit for a solve.
std::vector<MeshViolation> mesh_validate(const Mesh& mesh);

/// Mirrors the mesh about the x = 0 plane (anterior axis flip), restoring
/// positive cell orientation. Tags are preserved.
Mesh mirror_x(const Mesh& mesh);

} // namespace ocuflow
