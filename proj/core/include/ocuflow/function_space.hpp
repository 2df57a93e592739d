#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ocuflow/mesh.hpp"

namespace ocuflow {

enum class SpaceSupport {
  Whole,     // every cell
  FluidOnly, // cells tagged AqueousHumor
};

// ============================================================================
// Continuous Lagrange space of degree 1 or 2 (scalar or vector) over the
// whole mesh or restricted to the flow region. Scalar entity dofs are
// numbered vertices-first then edge midpoints, compacted over the support in
// first-appearance order, so two builds over the same mesh agree exactly.
// A vector dof is scalar_dof * components + component.
// ============================================================================
class FunctionSpace {
public:
  FunctionSpace(const Mesh& mesh, int degree, int components, SpaceSupport support);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  SpaceSupport support() const { return support_; }

  int n_scalar() const { return n_scalar_; }
  int n_dofs() const { return n_scalar_ * components_; }
  int local_size() const { return local_size_; } // scalar basis functions per cell

  bool cell_active(int c) const { return active_[c]; }
  const std::vector<int>& active_cells() const { return active_cells_; }

  /// Scalar dofs of one active cell, vertices first then edges.
  std::span<const int> cell_dofs(int c) const;

  int vertex_dof(int v) const { return vertex_dof_[v]; }
  int edge_dof(int e) const { return degree_ == 1 ? -1 : edge_dof_[e]; }
  int edge_index(int v0, int v1) const;
  int n_edges() const { return n_edges_; }

  /// Scalar dofs lying on facets carrying any of the given tags (sorted,
  /// unique, restricted to the support).
  std::vector<int> dofs_on_tags(std::span<const int> tags) const;

  /// Physical position of each scalar dof (vertex or edge midpoint).
  const std::vector<double>& dof_coords() const { return dof_coords_; }

private:
  const Mesh* mesh_;
  int degree_;
  int components_;
  SpaceSupport support_;
  int n_scalar_ = 0;
  int n_edges_ = 0;
  int local_size_ = 0;

  std::vector<bool> active_;
  std::vector<int> active_cells_;
  std::vector<int> vertex_dof_;
  std::vector<int> edge_dof_;
  std::vector<int> cell_dofs_;      // local_size per cell (ordered by cell id, -1 rows for inactive)
  std::vector<long long> edge_key_; // sorted (v0, v1) packed, index = edge id
  std::vector<int> edge_lookup_;    // sorted permutation of edge ids by key
  std::vector<double> dof_coords_;
};

/// Nodal interpolation: fn(x, out) fills `components` values at position x.
std::vector<double> interpolate(const FunctionSpace& space,
                                const std::function<void(const double*, double*)>& fn);

} // namespace ocuflow
