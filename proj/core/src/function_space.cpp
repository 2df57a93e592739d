#include "ocuflow/function_space.hpp"

#include <algorithm>
#include <stdexcept>

#include "ocuflow/basis.hpp"

namespace ocuflow {

namespace {
inline long long pack_edge(int a, int b) {
  if (a > b) std::swap(a, b);
  return (long long)a << 32 | (unsigned)b;
}
} // namespace

FunctionSpace::FunctionSpace(const Mesh& mesh, int degree, int components, SpaceSupport support)
    : mesh_(&mesh), degree_(degree), components_(components), support_(support) {
  if (degree != 1 && degree != 2) throw std::runtime_error("function space: degree must be 1 or 2");
  if (components < 1 || components > 3) throw std::runtime_error("function space: bad component count");
  const int dim = mesh.dim;
  const int nc = mesh.n_cells();
  const int nv = mesh.n_vertices();
  local_size_ = basis_size(dim, degree);
  const int verts_per_cell = dim + 1;
  const int edges_per_cell = dim == 2 ? 3 : 6;
  static constexpr int kTriEdges[3][2] = {{1, 2}, {2, 0}, {0, 1}};
  static constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

  active_.assign(nc, false);
  for (int c = 0; c < nc; ++c)
    active_[c] = support == SpaceSupport::Whole || mesh.cell_region[c] == region::AqueousHumor;
  for (int c = 0; c < nc; ++c)
    if (active_[c]) active_cells_.push_back(c);

  // mesh-wide edge enumeration in first-appearance order
  std::vector<std::pair<long long, int>> edge_map; // filled then sorted for lookup
  std::vector<int> cell_edges((std::size_t)nc * edges_per_cell, -1);
  {
    std::map<long long, int> seen;
    for (int c = 0; c < nc; ++c) {
      const auto cv = mesh.cell(c);
      for (int e = 0; e < edges_per_cell; ++e) {
        const int a = cv[dim == 2 ? kTriEdges[e][0] : kTetEdges[e][0]];
        const int b = cv[dim == 2 ? kTriEdges[e][1] : kTetEdges[e][1]];
        const long long key = pack_edge(a, b);
        auto [it, inserted] = seen.emplace(key, (int)seen.size());
        cell_edges[(std::size_t)c * edges_per_cell + e] = it->second;
      }
    }
    n_edges_ = (int)seen.size();
    edge_key_.resize(n_edges_);
    for (const auto& [key, id] : seen) edge_key_[id] = key;
    edge_lookup_.resize(n_edges_);
    for (int i = 0; i < n_edges_; ++i) edge_lookup_[i] = i;
    std::sort(edge_lookup_.begin(), edge_lookup_.end(),
              [&](int x, int y) { return edge_key_[x] < edge_key_[y]; });
  }

  vertex_dof_.assign(nv, -1);
  edge_dof_.assign(degree == 2 ? n_edges_ : 0, -1);
  int next = 0;
  for (int c : active_cells_) {
    const auto cv = mesh.cell(c);
    for (int i = 0; i < verts_per_cell; ++i)
      if (vertex_dof_[cv[i]] < 0) vertex_dof_[cv[i]] = next++;
  }
  if (degree == 2) {
    for (int c : active_cells_)
      for (int e = 0; e < edges_per_cell; ++e) {
        const int eid = cell_edges[(std::size_t)c * edges_per_cell + e];
        if (edge_dof_[eid] < 0) edge_dof_[eid] = next++;
      }
  }
  n_scalar_ = next;

  cell_dofs_.assign((std::size_t)nc * local_size_, -1);
  for (int c : active_cells_) {
    const auto cv = mesh.cell(c);
    int* out = &cell_dofs_[(std::size_t)c * local_size_];
    for (int i = 0; i < verts_per_cell; ++i) out[i] = vertex_dof_[cv[i]];
    if (degree == 2)
      for (int e = 0; e < edges_per_cell; ++e)
        out[verts_per_cell + e] = edge_dof_[cell_edges[(std::size_t)c * edges_per_cell + e]];
  }

  dof_coords_.assign((std::size_t)n_scalar_ * dim, 0.0);
  for (int v = 0; v < nv; ++v)
    if (vertex_dof_[v] >= 0)
      for (int d = 0; d < dim; ++d)
        dof_coords_[(std::size_t)vertex_dof_[v] * dim + d] = mesh.coords[(std::size_t)v * dim + d];
  if (degree == 2) {
    for (int e = 0; e < n_edges_; ++e) {
      if (edge_dof_[e] < 0) continue;
      const int a = (int)(edge_key_[e] >> 32);
      const int b = (int)(edge_key_[e] & 0xffffffffLL);
      for (int d = 0; d < dim; ++d)
        dof_coords_[(std::size_t)edge_dof_[e] * dim + d] =
            0.5 * (mesh.coords[(std::size_t)a * dim + d] + mesh.coords[(std::size_t)b * dim + d]);
    }
  }
}

std::span<const int> FunctionSpace::cell_dofs(int c) const {
  return {cell_dofs_.data() + (std::size_t)c * local_size_, (std::size_t)local_size_};
}

int FunctionSpace::edge_index(int v0, int v1) const {
  const long long key = pack_edge(v0, v1);
  auto it = std::lower_bound(edge_lookup_.begin(), edge_lookup_.end(), key,
                             [&](int id, long long k) { return edge_key_[id] < k; });
  if (it == edge_lookup_.end() || edge_key_[*it] != key) return -1;
  return *it;
}

std::vector<int> FunctionSpace::dofs_on_tags(std::span<const int> tags) const {
  std::vector<int> out;
  const Mesh& m = *mesh_;
  for (int f = 0; f < m.n_facets(); ++f) {
    bool match = false;
    for (int t : tags)
      if (m.facet_tag[f] == t) match = true;
    if (!match) continue;
    const auto fv = m.facet(f);
    for (int v : fv)
      if (vertex_dof_[v] >= 0) out.push_back(vertex_dof_[v]);
    if (degree_ == 2 && m.dim == 2) {
      const int e = edge_index(fv[0], fv[1]);
      if (e >= 0 && edge_dof_[e] >= 0) out.push_back(edge_dof_[e]);
    } else if (degree_ == 2 && m.dim == 3) {
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          const int e = edge_index(fv[i], fv[j]);
          if (e >= 0 && edge_dof_[e] >= 0) out.push_back(edge_dof_[e]);
        }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> interpolate(const FunctionSpace& space,
                                const std::function<void(const double*, double*)>& fn) {
  const int nc = space.components();
  std::vector<double> coeffs((std::size_t)space.n_dofs(), 0.0);
  std::vector<double> vals(nc);
  const auto& xy = space.dof_coords();
  const int dim = space.mesh().dim;
  for (int s = 0; s < space.n_scalar(); ++s) {
    fn(&xy[(std::size_t)s * dim], vals.data());
    for (int c = 0; c < nc; ++c) coeffs[(std::size_t)s * nc + c] = vals[c];
  }
  return coeffs;
}

} // namespace ocuflow
