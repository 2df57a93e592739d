#include "ocuflow/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ocuflow/basis.hpp"
#include "ocuflow/parallel.hpp"

namespace ocuflow {

namespace {

// ==========================================================================
// Per-cell affine geometry and cached reference-basis tables.
// ==========================================================================

struct CellGeom {
  double x0[2];
  double inv[2][2]; // J^{-1}
  double det;       // 2 * area, positive for validated meshes
};

CellGeom cell_geometry(const Mesh& mesh, int c) {
  if (mesh.dim != 2)
    throw std::runtime_error("assembly supports 2d meshes only");
  const auto cell = mesh.cell(c);
  const auto a = mesh.vertex(cell[0]);
  const auto b = mesh.vertex(cell[1]);
  const auto d = mesh.vertex(cell[2]);
  CellGeom g{};
  g.x0[0] = a[0];
  g.x0[1] = a[1];
  const double j00 = b[0] - a[0], j01 = d[0] - a[0];
  const double j10 = b[1] - a[1], j11 = d[1] - a[1];
  g.det = j00 * j11 - j01 * j10;
  const double s = 1.0 / g.det;
  g.inv[0][0] = j11 * s;
  g.inv[0][1] = -j01 * s;
  g.inv[1][0] = -j10 * s;
  g.inv[1][1] = j00 * s;
  return g;
}

void map_point(const Mesh& mesh, int c, const double* ref, double* phys) {
  const auto cell = mesh.cell(c);
  const auto a = mesh.vertex(cell[0]);
  const auto b = mesh.vertex(cell[1]);
  const auto d = mesh.vertex(cell[2]);
  phys[0] = a[0] + (b[0] - a[0]) * ref[0] + (d[0] - a[0]) * ref[1];
  phys[1] = a[1] + (b[1] - a[1]) * ref[0] + (d[1] - a[1]) * ref[1];
}

/// Reference basis values/gradients tabulated at the points of one rule.
struct BasisTable {
  QuadratureRule rule;
  int nb = 0;
  std::vector<double> val;  // [q * nb + b]
  std::vector<double> grad; // [(q * nb + b) * 2 + d]
};

BasisTable tabulate(int degree, int quad_degree) {
  BasisTable t{quadrature_rule(2, quad_degree), 0, {}, {}};
  t.nb = basis_size(2, degree);
  const int nq = t.rule.size();
  t.val.resize(static_cast<size_t>(nq) * t.nb);
  t.grad.resize(static_cast<size_t>(nq) * t.nb * 2);
  std::vector<double> v(t.nb), g(t.nb * 2);
  for (int q = 0; q < nq; ++q) {
    reference_basis_eval(2, degree, t.rule.point(q), v.data(), g.data());
    for (int b = 0; b < t.nb; ++b) {
      t.val[static_cast<size_t>(q) * t.nb + b] = v[b];
      t.grad[(static_cast<size_t>(q) * t.nb + b) * 2 + 0] = g[b * 2 + 0];
      t.grad[(static_cast<size_t>(q) * t.nb + b) * 2 + 1] = g[b * 2 + 1];
    }
  }
  return t;
}

/// Physical gradients of every basis function at one quadrature point.
void physical_gradients(const BasisTable& t, const CellGeom& g, int q, double* gp) {
  for (int b = 0; b < t.nb; ++b) {
    const double g0 = t.grad[(static_cast<size_t>(q) * t.nb + b) * 2 + 0];
    const double g1 = t.grad[(static_cast<size_t>(q) * t.nb + b) * 2 + 1];
    gp[b * 2 + 0] = g.inv[0][0] * g0 + g.inv[1][0] * g1;
    gp[b * 2 + 1] = g.inv[0][1] * g0 + g.inv[1][1] * g1;
  }
}

/// Runs `compute` over the active cells in parallel (each writing a private
/// element buffer), then scatters serially in ascending cell order so the
/// accumulated matrix is independent of the thread count.
template <class Compute, class Scatter>
void assemble_deterministic(std::span<const int> cells, int elem_size, Compute&& compute,
                            Scatter&& scatter) {
  std::vector<double> buffer(cells.size() * static_cast<size_t>(elem_size));
  parallel_chunks(cells.size(), [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      compute(cells[i], buffer.data() + i * static_cast<size_t>(elem_size));
  });
  for (size_t i = 0; i < cells.size(); ++i)
    scatter(cells[i], buffer.data() + i * static_cast<size_t>(elem_size));
}

void check_same_cells(const FunctionSpace& a, const FunctionSpace& b) {
  if (a.active_cells().size() != b.active_cells().size())
    throw std::runtime_error("spaces cover different cell sets");
}

} // namespace

RegionValue RegionValue::by_region(std::vector<double> values) {
  RegionValue rv(0.0);
  rv.per_region_ = std::move(values);
  return rv;
}

double RegionValue::operator()(int region) const {
  if (per_region_.empty())
    return uniform_;
  if (region < 0 || region >= static_cast<int>(per_region_.size()))
    throw std::out_of_range("no coefficient for region " + std::to_string(region));
  return per_region_[static_cast<size_t>(region)];
}

int quad_degree_mass(int p) { return 2 * p; }

int quad_degree_convection(int p) { return std::min(3 * p - 1, 6); }

void pattern_cells(SparsityPattern& sp, const FunctionSpace& test, const FunctionSpace& trial,
                   int row_offset, int col_offset) {
  const int tc = test.components();
  const int uc = trial.components();
  std::vector<int> rows, cols;
  for (int c : test.active_cells()) {
    const auto td = test.cell_dofs(c);
    const auto ud = trial.cell_dofs(c);
    if (td.empty() || ud.empty() || td[0] < 0 || ud[0] < 0)
      continue; // cell outside the other space's support
    rows.clear();
    cols.clear();
    for (int sd : td)
      for (int k = 0; k < tc; ++k)
        rows.push_back(row_offset + sd * tc + k);
    for (int sd : ud)
      for (int k = 0; k < uc; ++k)
        cols.push_back(col_offset + sd * uc + k);
    sp.insert_clique(rows, cols);
  }
}

void pattern_facets(SparsityPattern& sp, const FunctionSpace& space, int tag, int row_offset,
                    int col_offset) {
  const Mesh& mesh = space.mesh();
  std::vector<int> dofs;
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (mesh.facet_tag[static_cast<size_t>(f)] != tag)
      continue;
    const auto fv = mesh.facet(f);
    dofs.clear();
    dofs.push_back(space.vertex_dof(fv[0]));
    dofs.push_back(space.vertex_dof(fv[1]));
    if (space.degree() == 2)
      dofs.push_back(space.edge_dof(space.edge_index(fv[0], fv[1])));
    for (int d : dofs)
      if (d < 0)
        throw std::runtime_error("tagged facet outside the space's support");
    for (int i : dofs)
      for (int j : dofs)
        sp.insert(row_offset + i, col_offset + j);
  }
}

// ==========================================================================
// Cell forms.
// ==========================================================================

void assemble_mass(const FunctionSpace& space, const RegionValue& coeff, const BlockView& out,
                   int quad_degree) {
  const Mesh& mesh = space.mesh();
  const BasisTable t = tabulate(space.degree(), quad_degree);
  const int nb = t.nb;
  const int nc = space.components();
  assemble_deterministic(
      space.active_cells(), nb * nb,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        const double kc = coeff(mesh.cell_region[static_cast<size_t>(c)]);
        std::fill(elem, elem + nb * nb, 0.0);
        for (int q = 0; q < t.rule.size(); ++q) {
          const double w = t.rule.weights[static_cast<size_t>(q)] * g.det * kc;
          const double* n = &t.val[static_cast<size_t>(q) * nb];
          for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
              elem[i * nb + j] += w * n[i] * n[j];
        }
      },
      [&](int c, const double* elem) {
        const auto dofs = space.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int j = 0; j < nb; ++j)
            for (int k = 0; k < nc; ++k)
              out.add(dofs[i] * nc + k, dofs[j] * nc + k, elem[i * nb + j]);
      });
}

void assemble_diffusion(const FunctionSpace& space, const RegionValue& coeff, const BlockView& out,
                        int quad_degree) {
  const Mesh& mesh = space.mesh();
  const BasisTable t = tabulate(space.degree(), quad_degree);
  const int nb = t.nb;
  const int nc = space.components();
  assemble_deterministic(
      space.active_cells(), nb * nb,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        const double kc = coeff(mesh.cell_region[static_cast<size_t>(c)]);
        std::fill(elem, elem + nb * nb, 0.0);
        std::vector<double> gp(static_cast<size_t>(nb) * 2);
        for (int q = 0; q < t.rule.size(); ++q) {
          const double w = t.rule.weights[static_cast<size_t>(q)] * g.det * kc;
          physical_gradients(t, g, q, gp.data());
          for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
              elem[i * nb + j] += w * (gp[i * 2] * gp[j * 2] + gp[i * 2 + 1] * gp[j * 2 + 1]);
        }
      },
      [&](int c, const double* elem) {
        const auto dofs = space.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int j = 0; j < nb; ++j)
            for (int k = 0; k < nc; ++k)
              out.add(dofs[i] * nc + k, dofs[j] * nc + k, elem[i * nb + j]);
      });
}

void assemble_divergence(const FunctionSpace& pressure, const FunctionSpace& velocity,
                         const BlockView& out) {
  check_same_cells(pressure, velocity);
  const Mesh& mesh = velocity.mesh();
  // psi (degree 1) times grad(phi) (degree 1 for P2): exact at degree 2; use 3.
  const int qd = pressure.degree() + velocity.degree();
  const BasisTable tp = tabulate(pressure.degree(), qd);
  const BasisTable tu = tabulate(velocity.degree(), qd);
  const int np = tp.nb, nu = tu.nb;
  assemble_deterministic(
      velocity.active_cells(), np * nu * 2,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        std::fill(elem, elem + np * nu * 2, 0.0);
        std::vector<double> gu(static_cast<size_t>(nu) * 2);
        for (int q = 0; q < tu.rule.size(); ++q) {
          const double w = tu.rule.weights[static_cast<size_t>(q)] * g.det;
          const double* psi = &tp.val[static_cast<size_t>(q) * np];
          physical_gradients(tu, g, q, gu.data());
          for (int i = 0; i < np; ++i)
            for (int a = 0; a < nu; ++a)
              for (int d = 0; d < 2; ++d)
                elem[(i * nu + a) * 2 + d] += w * psi[i] * gu[a * 2 + d];
        }
      },
      [&](int c, const double* elem) {
        const auto pd = pressure.cell_dofs(c);
        const auto ud = velocity.cell_dofs(c);
        for (int i = 0; i < np; ++i)
          for (int a = 0; a < nu; ++a)
            for (int d = 0; d < 2; ++d)
              out.add(pd[i], ud[a] * 2 + d, elem[(i * nu + a) * 2 + d]);
      });
}

void assemble_convection_scalar(const FunctionSpace& scalar, const FunctionSpace& velocity,
                                std::span<const double> u, double rho_cp, const BlockView& out,
                                int quad_degree) {
  const Mesh& mesh = velocity.mesh();
  const BasisTable ts = tabulate(scalar.degree(), quad_degree);
  const BasisTable tu = tabulate(velocity.degree(), quad_degree);
  const int nb = ts.nb, nu = tu.nb;
  assemble_deterministic(
      velocity.active_cells(), nb * nb,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        const auto ud = velocity.cell_dofs(c);
        std::fill(elem, elem + nb * nb, 0.0);
        std::vector<double> gs(static_cast<size_t>(nb) * 2);
        for (int q = 0; q < ts.rule.size(); ++q) {
          const double w = ts.rule.weights[static_cast<size_t>(q)] * g.det * rho_cp;
          double uq[2] = {0.0, 0.0};
          for (int a = 0; a < nu; ++a) {
            const double na = tu.val[static_cast<size_t>(q) * nu + a];
            uq[0] += na * u[static_cast<size_t>(ud[a]) * 2 + 0];
            uq[1] += na * u[static_cast<size_t>(ud[a]) * 2 + 1];
          }
          const double* n = &ts.val[static_cast<size_t>(q) * nb];
          physical_gradients(ts, g, q, gs.data());
          for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
              elem[i * nb + j] += w * n[i] * (uq[0] * gs[j * 2] + uq[1] * gs[j * 2 + 1]);
        }
      },
      [&](int c, const double* elem) {
        const auto dofs = scalar.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int j = 0; j < nb; ++j)
            out.add(dofs[i], dofs[j], elem[i * nb + j]);
      });
}

void assemble_convection_vector(const FunctionSpace& velocity, std::span<const double> u,
                                double rho, const BlockView& advect, const BlockView* react,
                                int quad_degree) {
  const Mesh& mesh = velocity.mesh();
  const BasisTable t = tabulate(velocity.degree(), quad_degree);
  const int nb = t.nb;
  // Element layout: advection matrix (nb x nb, shared per component), then the
  // reaction block (nb x nb x 2 x 2) when requested.
  const int esize = nb * nb + (react != nullptr ? nb * nb * 4 : 0);
  assemble_deterministic(
      velocity.active_cells(), esize,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        const auto ud = velocity.cell_dofs(c);
        std::fill(elem, elem + esize, 0.0);
        std::vector<double> gp(static_cast<size_t>(nb) * 2);
        for (int q = 0; q < t.rule.size(); ++q) {
          const double w = t.rule.weights[static_cast<size_t>(q)] * g.det * rho;
          const double* n = &t.val[static_cast<size_t>(q) * nb];
          physical_gradients(t, g, q, gp.data());
          double uq[2] = {0.0, 0.0};
          double grad_u[2][2] = {{0.0, 0.0}, {0.0, 0.0}}; // grad_u[i][d] = du_i/dx_d
          for (int a = 0; a < nb; ++a) {
            const double u0 = u[static_cast<size_t>(ud[a]) * 2 + 0];
            const double u1 = u[static_cast<size_t>(ud[a]) * 2 + 1];
            uq[0] += n[a] * u0;
            uq[1] += n[a] * u1;
            grad_u[0][0] += gp[a * 2 + 0] * u0;
            grad_u[0][1] += gp[a * 2 + 1] * u0;
            grad_u[1][0] += gp[a * 2 + 0] * u1;
            grad_u[1][1] += gp[a * 2 + 1] * u1;
          }
          for (int i = 0; i < nb; ++i) {
            for (int j = 0; j < nb; ++j) {
              elem[i * nb + j] += w * n[i] * (uq[0] * gp[j * 2] + uq[1] * gp[j * 2 + 1]);
              if (react != nullptr) {
                // (phi_j e_d . grad u)_r phi_i e_r  ->  n_j * du_r/dx_d * n_i
                for (int r = 0; r < 2; ++r)
                  for (int d = 0; d < 2; ++d)
                    elem[nb * nb + ((i * nb + j) * 2 + r) * 2 + d] +=
                        w * n[i] * n[j] * grad_u[r][d];
              }
            }
          }
        }
      },
      [&](int c, const double* elem) {
        const auto dofs = velocity.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int j = 0; j < nb; ++j) {
            for (int k = 0; k < 2; ++k)
              advect.add(dofs[i] * 2 + k, dofs[j] * 2 + k, elem[i * nb + j]);
            if (react != nullptr)
              for (int r = 0; r < 2; ++r)
                for (int d = 0; d < 2; ++d)
                  react->add(dofs[i] * 2 + r, dofs[j] * 2 + d,
                             elem[nb * nb + ((i * nb + j) * 2 + r) * 2 + d]);
          }
      });
}

void assemble_buoyancy(const FunctionSpace& velocity, const FunctionSpace& temperature, double rho,
                       double beta, const double* gravity, double t_ref, const BlockView& c_out,
                       const VectorView& load0, int quad_degree) {
  const Mesh& mesh = velocity.mesh();
  const BasisTable tu = tabulate(velocity.degree(), quad_degree);
  const BasisTable tt = tabulate(temperature.degree(), quad_degree);
  const int nu = tu.nb, nt = tt.nb;
  // rhs_u(i,d) = -rho beta g_d integral (T - t_ref) phi_i
  //            = sum_j C((i,d),j) T_j + load0(i,d)
  assemble_deterministic(
      velocity.active_cells(), nu * nt + nu,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        std::fill(elem, elem + nu * nt + nu, 0.0);
        for (int q = 0; q < tu.rule.size(); ++q) {
          const double w = tu.rule.weights[static_cast<size_t>(q)] * g.det;
          const double* nv = &tu.val[static_cast<size_t>(q) * nu];
          const double* nth = &tt.val[static_cast<size_t>(q) * nt];
          for (int i = 0; i < nu; ++i) {
            for (int j = 0; j < nt; ++j)
              elem[i * nt + j] += w * nv[i] * nth[j];
            elem[nu * nt + i] += w * nv[i];
          }
        }
      },
      [&](int c, const double* elem) {
        const auto ud = velocity.cell_dofs(c);
        const auto td = temperature.cell_dofs(c);
        for (int i = 0; i < nu; ++i)
          for (int d = 0; d < 2; ++d) {
            const double gfac = -rho * beta * gravity[d];
            for (int j = 0; j < nt; ++j)
              c_out.add(ud[i] * 2 + d, td[j], gfac * elem[i * nt + j]);
            load0.add(ud[i] * 2 + d, -gfac * t_ref * elem[nu * nt + i]);
          }
      });
}

void assemble_heat_velocity_coupling(const FunctionSpace& scalar, const FunctionSpace& velocity,
                                     std::span<const double> temperature, double rho_cp,
                                     const BlockView& out, int quad_degree) {
  const Mesh& mesh = velocity.mesh();
  const BasisTable ts = tabulate(scalar.degree(), quad_degree);
  const BasisTable tu = tabulate(velocity.degree(), quad_degree);
  const int nb = ts.nb, nu = tu.nb;
  assemble_deterministic(
      velocity.active_cells(), nb * nu * 2,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        const auto td = scalar.cell_dofs(c);
        std::fill(elem, elem + nb * nu * 2, 0.0);
        std::vector<double> gs(static_cast<size_t>(nb) * 2);
        for (int q = 0; q < ts.rule.size(); ++q) {
          const double w = ts.rule.weights[static_cast<size_t>(q)] * g.det * rho_cp;
          physical_gradients(ts, g, q, gs.data());
          double grad_t[2] = {0.0, 0.0};
          for (int j = 0; j < nb; ++j) {
            grad_t[0] += gs[j * 2 + 0] * temperature[static_cast<size_t>(td[j])];
            grad_t[1] += gs[j * 2 + 1] * temperature[static_cast<size_t>(td[j])];
          }
          const double* ni = &ts.val[static_cast<size_t>(q) * nb];
          const double* na = &tu.val[static_cast<size_t>(q) * nu];
          for (int i = 0; i < nb; ++i)
            for (int a = 0; a < nu; ++a)
              for (int d = 0; d < 2; ++d)
                elem[(i * nu + a) * 2 + d] += w * ni[i] * na[a] * grad_t[d];
        }
      },
      [&](int c, const double* elem) {
        const auto td = scalar.cell_dofs(c);
        const auto ud = velocity.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int a = 0; a < nu; ++a)
            for (int d = 0; d < 2; ++d)
              out.add(td[i], ud[a] * 2 + d, elem[(i * nu + a) * 2 + d]);
      });
}

void assemble_load(const FunctionSpace& space,
                   const std::function<void(const double*, double*)>& f, const VectorView& out,
                   int quad_degree) {
  const Mesh& mesh = space.mesh();
  const BasisTable t = tabulate(space.degree(), quad_degree);
  const int nb = t.nb;
  const int nc = space.components();
  assemble_deterministic(
      space.active_cells(), nb * nc,
      [&](int c, double* elem) {
        const CellGeom g = cell_geometry(mesh, c);
        std::fill(elem, elem + nb * nc, 0.0);
        std::vector<double> fv(static_cast<size_t>(nc));
        double x[2];
        for (int q = 0; q < t.rule.size(); ++q) {
          const double w = t.rule.weights[static_cast<size_t>(q)] * g.det;
          map_point(mesh, c, t.rule.point(q), x);
          f(x, fv.data());
          const double* n = &t.val[static_cast<size_t>(q) * nb];
          for (int i = 0; i < nb; ++i)
            for (int k = 0; k < nc; ++k)
              elem[i * nc + k] += w * n[i] * fv[static_cast<size_t>(k)];
        }
      },
      [&](int c, const double* elem) {
        const auto dofs = space.cell_dofs(c);
        for (int i = 0; i < nb; ++i)
          for (int k = 0; k < nc; ++k)
            out.add(dofs[i] * nc + k, elem[i * nc + k]);
      });
}

// ==========================================================================
// Facet (Robin) forms. The trace of the 2d basis on an edge is the 1d
// Lagrange basis through the edge's nodes, so facet terms integrate in the
// edge parameter directly.
// ==========================================================================

namespace {

struct FacetTrace {
  std::vector<int> dofs;                           // scalar dofs on the facet
  std::function<void(double, double*)> shape;      // 1d shapes at parameter s
};

FacetTrace facet_trace(const FunctionSpace& space, int facet) {
  const Mesh& mesh = space.mesh();
  const auto fv = mesh.facet(facet);
  FacetTrace tr;
  tr.dofs = {space.vertex_dof(fv[0]), space.vertex_dof(fv[1])};
  if (space.degree() == 2) {
    tr.dofs.push_back(space.edge_dof(space.edge_index(fv[0], fv[1])));
    tr.shape = [](double s, double* n) {
      n[0] = (1.0 - s) * (1.0 - 2.0 * s);
      n[1] = s * (2.0 * s - 1.0);
      n[2] = 4.0 * s * (1.0 - s);
    };
  } else {
    tr.shape = [](double s, double* n) {
      n[0] = 1.0 - s;
      n[1] = s;
    };
  }
  for (int d : tr.dofs)
    if (d < 0)
      throw std::runtime_error("tagged facet outside the space's support");
  return tr;
}

double facet_length(const Mesh& mesh, int facet) {
  const auto fv = mesh.facet(facet);
  const auto a = mesh.vertex(fv[0]);
  const auto b = mesh.vertex(fv[1]);
  return std::hypot(b[0] - a[0], b[1] - a[1]);
}

} // namespace

void apply_robin(const FunctionSpace& space, int tag, double h, double t_ext, double flux_offset,
                 const BlockView& mat, const VectorView& rhs) {
  const Mesh& mesh = space.mesh();
  std::vector<double> gp, gw;
  gauss_legendre_01(3, gp, gw); // exact through degree 5
  std::vector<double> n(3);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (mesh.facet_tag[static_cast<size_t>(f)] != tag)
      continue;
    const FacetTrace tr = facet_trace(space, f);
    const double len = facet_length(mesh, f);
    const int nb = static_cast<int>(tr.dofs.size());
    for (size_t q = 0; q < gp.size(); ++q) {
      const double w = gw[q] * len;
      tr.shape(gp[q], n.data());
      for (int i = 0; i < nb; ++i) {
        for (int j = 0; j < nb; ++j)
          mat.add(tr.dofs[static_cast<size_t>(i)], tr.dofs[static_cast<size_t>(j)],
                  w * h * n[static_cast<size_t>(i)] * n[static_cast<size_t>(j)]);
        rhs.add(tr.dofs[static_cast<size_t>(i)],
                w * (h * t_ext - flux_offset) * n[static_cast<size_t>(i)]);
      }
    }
  }
}

double robin_flux(const FunctionSpace& space, std::span<const double> T, int tag, double h,
                  double t_ext, double flux_offset) {
  const Mesh& mesh = space.mesh();
  std::vector<double> gp, gw;
  gauss_legendre_01(3, gp, gw);
  std::vector<double> n(3);
  double total = 0.0;
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (mesh.facet_tag[static_cast<size_t>(f)] != tag)
      continue;
    const FacetTrace tr = facet_trace(space, f);
    const double len = facet_length(mesh, f);
    for (size_t q = 0; q < gp.size(); ++q) {
      const double w = gw[q] * len;
      tr.shape(gp[q], n.data());
      double tq = 0.0;
      for (size_t i = 0; i < tr.dofs.size(); ++i)
        tq += n[i] * T[static_cast<size_t>(tr.dofs[i])];
      total += w * (h * (tq - t_ext) + flux_offset);
    }
  }
  return total;
}

void apply_dirichlet(CsrMatrix& mat, std::span<double> rhs, std::span<const int> dofs,
                     std::span<const double> values, bool symmetric) {
  if (dofs.size() != values.size())
    throw std::invalid_argument("dirichlet dof/value size mismatch");
  if (symmetric) {
    // Move the constrained columns to the rhs before wiping the rows.
    std::vector<char> is_bc(static_cast<size_t>(mat.cols()), 0);
    std::vector<double> bc_value(static_cast<size_t>(mat.cols()), 0.0);
    for (size_t k = 0; k < dofs.size(); ++k) {
      is_bc[static_cast<size_t>(dofs[k])] = 1;
      bc_value[static_cast<size_t>(dofs[k])] = values[k];
    }
    const auto& ptr = mat.row_ptr();
    const auto& col = mat.col_idx();
    auto& val = mat.values();
    for (int r = 0; r < mat.rows(); ++r) {
      if (is_bc[static_cast<size_t>(r)])
        continue;
      for (int p = ptr[static_cast<size_t>(r)]; p < ptr[static_cast<size_t>(r) + 1]; ++p) {
        const int c = col[static_cast<size_t>(p)];
        if (is_bc[static_cast<size_t>(c)]) {
          rhs[static_cast<size_t>(r)] -= val[static_cast<size_t>(p)] * bc_value[static_cast<size_t>(c)];
          val[static_cast<size_t>(p)] = 0.0;
        }
      }
    }
  }
  for (size_t k = 0; k < dofs.size(); ++k) {
    mat.set_row_identity(dofs[k]);
    rhs[static_cast<size_t>(dofs[k])] = values[k];
  }
}

// ==========================================================================
// Field evaluation.
// ==========================================================================

void eval_field(const FunctionSpace& space, std::span<const double> coeffs, int cell,
                const double* ref_point, double* values, double* gradients) {
  const Mesh& mesh = space.mesh();
  const int nb = basis_size(2, space.degree());
  const int nc = space.components();
  std::vector<double> n(static_cast<size_t>(nb)), g(static_cast<size_t>(nb) * 2);
  reference_basis_eval(2, space.degree(), ref_point, n.data(), g.data());
  const CellGeom geom = cell_geometry(mesh, cell);
  const auto dofs = space.cell_dofs(cell);
  if (dofs.empty() || dofs[0] < 0)
    throw std::runtime_error("field evaluated outside its support");
  for (int k = 0; k < nc; ++k)
    values[k] = 0.0;
  if (gradients != nullptr)
    for (int k = 0; k < nc * 2; ++k)
      gradients[k] = 0.0;
  for (int b = 0; b < nb; ++b) {
    double gx = 0.0, gy = 0.0;
    if (gradients != nullptr) {
      gx = geom.inv[0][0] * g[static_cast<size_t>(b) * 2] + geom.inv[1][0] * g[static_cast<size_t>(b) * 2 + 1];
      gy = geom.inv[0][1] * g[static_cast<size_t>(b) * 2] + geom.inv[1][1] * g[static_cast<size_t>(b) * 2 + 1];
    }
    for (int k = 0; k < nc; ++k) {
      const double coef = coeffs[static_cast<size_t>(dofs[b]) * nc + k];
      values[k] += n[static_cast<size_t>(b)] * coef;
      if (gradients != nullptr) {
        gradients[k * 2 + 0] += gx * coef;
        gradients[k * 2 + 1] += gy * coef;
      }
    }
  }
}

double l2_error(const FunctionSpace& space, std::span<const double> coeffs,
                const std::function<void(const double*, double*)>& exact, int quad_degree) {
  const Mesh& mesh = space.mesh();
  const BasisTable t = tabulate(space.degree(), quad_degree);
  const int nb = t.nb;
  const int nc = space.components();
  double total = 0.0;
  std::vector<double> ex(static_cast<size_t>(nc));
  double x[2];
  for (int c : space.active_cells()) {
    const CellGeom g = cell_geometry(mesh, c);
    const auto dofs = space.cell_dofs(c);
    for (int q = 0; q < t.rule.size(); ++q) {
      const double w = t.rule.weights[static_cast<size_t>(q)] * g.det;
      map_point(mesh, c, t.rule.point(q), x);
      if (exact)
        exact(x, ex.data());
      else
        std::fill(ex.begin(), ex.end(), 0.0);
      const double* n = &t.val[static_cast<size_t>(q) * nb];
      for (int k = 0; k < nc; ++k) {
        double vh = 0.0;
        for (int b = 0; b < nb; ++b)
          vh += n[b] * coeffs[static_cast<size_t>(dofs[b]) * nc + k];
        const double diff = vh - ex[static_cast<size_t>(k)];
        total += w * diff * diff;
      }
    }
  }
  return std::sqrt(total);
}

double l2_norm_field(const FunctionSpace& space, std::span<const double> coeffs, int quad_degree) {
  return l2_error(space, coeffs, nullptr, quad_degree);
}

} // namespace ocuflow
