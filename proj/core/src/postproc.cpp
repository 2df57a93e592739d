#include "ocuflow/postproc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ocuflow/basis.hpp"
#include "ocuflow/gmres.hpp"
#include "ocuflow/ilu.hpp"
#include "ocuflow/quadrature.hpp"

namespace ocuflow {

namespace {

std::string fmt(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out)
    throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace

double pressure_display_mmhg(double pa, double offset_mmhg) {
  return pa / kPascalPerMmHg + offset_mmhg;
}

PressureGauge::PressureGauge(const CoupledProblem& problem, std::span<const double> x,
                             double offset_mmhg)
    : offset_mmhg_(offset_mmhg) {
  const auto g = problem.gravity();
  rho_g_[0] = problem.params().rho * g[0];
  rho_g_[1] = problem.params().rho * g[1];
  const auto p = problem.p_part(x);
  const FunctionSpace& q = problem.pressure_space();
  const auto& coords = q.dof_coords();
  bool first = true;
  for (size_t i = 0; i < p.size(); ++i) {
    const double tot = total_pa(p[i], &coords[i * 2]);
    if (first || tot > anchor_pa_) {
      anchor_pa_ = tot;
      first = false;
    }
  }
}

double PressureGauge::display_mmhg(double solved_pa, const double* r) const {
  return (total_pa(solved_pa, r) - anchor_pa_) / kPascalPerMmHg + offset_mmhg_;
}

// ============================================================================
// Legacy VTK writer
// ============================================================================

std::string solution_vtk_text(const CoupledProblem& problem, std::span<const double> x,
                              double pressure_offset_mmhg) {
  const FunctionSpace& v = problem.velocity_space();
  const FunctionSpace& q = problem.pressure_space();
  const FunctionSpace& s = problem.temperature_space();
  const Mesh& mesh = s.mesh();
  const auto u = problem.u_part(x);
  const auto p = problem.p_part(x);
  const auto t = problem.t_part(x);

  const int np = s.n_scalar();
  std::vector<double> vel(static_cast<size_t>(np) * 2, 0.0);
  std::vector<double> pres(static_cast<size_t>(np), 0.0);
  std::vector<char> in_fluid(static_cast<size_t>(np), 0);

  // Gather nodal velocity/pressure through the cell maps so the fluid-only
  // spaces never need a reverse entity lookup. Midside pressure is the P1
  // interpolant (edge average).
  for (int c : s.active_cells()) {
    const auto sd = s.cell_dofs(c);
    if (v.cell_active(c)) {
      const auto vd = v.cell_dofs(c);
      const auto qd = q.cell_dofs(c);
      for (int i = 0; i < 6; ++i) {
        vel[static_cast<size_t>(sd[i]) * 2 + 0] = u[static_cast<size_t>(vd[i]) * 2 + 0];
        vel[static_cast<size_t>(sd[i]) * 2 + 1] = u[static_cast<size_t>(vd[i]) * 2 + 1];
        in_fluid[static_cast<size_t>(sd[i])] = 1;
      }
      for (int i = 0; i < 3; ++i)
        pres[static_cast<size_t>(sd[i])] = p[qd[i]];
      for (int k = 0; k < 3; ++k)
        pres[static_cast<size_t>(sd[3 + k])] =
            0.5 * (p[qd[(k + 1) % 3]] + p[qd[(k + 2) % 3]]);
    }
  }
  const PressureGauge gauge(problem, x, pressure_offset_mmhg);

  const auto& coords = s.dof_coords();
  std::string out;
  out.reserve(static_cast<size_t>(np) * 80);
  out += "# vtk DataFile Version 3.0\n";
  out += "steady flow and temperature\n";
  out += "ASCII\n";
  out += "DATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(np) + " double\n";
  for (int i = 0; i < np; ++i)
    out += fmt(coords[static_cast<size_t>(i) * 2]) + " " +
           fmt(coords[static_cast<size_t>(i) * 2 + 1]) + " 0\n";

  // Each quadratic triangle splits into four linear ones through the midside
  // nodes (locals: vertices 0..2, edge k opposite vertex k at local 3+k).
  const int ncells = 4 * static_cast<int>(s.active_cells().size());
  out += "CELLS " + std::to_string(ncells) + " " + std::to_string(4 * ncells) + "\n";
  static const int sub[4][3] = {{0, 5, 4}, {1, 3, 5}, {2, 4, 3}, {3, 4, 5}};
  for (int c : s.active_cells()) {
    const auto sd = s.cell_dofs(c);
    for (const auto& tri : sub)
      out += "3 " + std::to_string(sd[tri[0]]) + " " + std::to_string(sd[tri[1]]) + " " +
             std::to_string(sd[tri[2]]) + "\n";
  }
  out += "CELL_TYPES " + std::to_string(ncells) + "\n";
  for (int i = 0; i < ncells; ++i)
    out += "5\n";

  out += "POINT_DATA " + std::to_string(np) + "\n";
  out += "VECTORS velocity double\n";
  for (int i = 0; i < np; ++i)
    out += fmt(vel[static_cast<size_t>(i) * 2]) + " " + fmt(vel[static_cast<size_t>(i) * 2 + 1]) +
           " 0\n";
  out += "SCALARS pressure_mmHg double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < np; ++i)
    out += fmt(in_fluid[static_cast<size_t>(i)]
                   ? gauge.display_mmhg(pres[static_cast<size_t>(i)],
                                        &coords[static_cast<size_t>(i) * 2])
                   : 0.0) +
           "\n";
  out += "SCALARS temperature_K double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < np; ++i)
    out += fmt(t[i]) + "\n";

  out += "CELL_DATA " + std::to_string(ncells) + "\n";
  out += "SCALARS region int 1\nLOOKUP_TABLE default\n";
  for (int c : s.active_cells()) {
    const std::string r = std::to_string(mesh.cell_region[c]) + "\n";
    for (int k = 0; k < 4; ++k)
      out += r;
  }
  return out;
}

void write_solution_vtk(const std::string& path, const CoupledProblem& problem,
                        std::span<const double> x, double pressure_offset_mmhg) {
  write_text_file(path, solution_vtk_text(problem, x, pressure_offset_mmhg));
}

// ============================================================================
// VTK lint
// ============================================================================

namespace {

struct TokenCursor {
  std::vector<std::string> tok;
  size_t pos = 0;

  bool done() const { return pos >= tok.size(); }
  const std::string* next() { return done() ? nullptr : &tok[pos++]; }
  const std::string* peek() const { return done() ? nullptr : &tok[pos]; }
};

bool parse_num(const std::string& s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_count(const std::string& s, long& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool take_numbers(TokenCursor& c, long n, std::vector<std::string>& problems,
                  const std::string& what) {
  for (long i = 0; i < n; ++i) {
    const std::string* t = c.next();
    double v;
    if (t == nullptr || !parse_num(*t, v)) {
      problems.push_back("truncated or non-numeric data in " + what);
      return false;
    }
  }
  return true;
}

} // namespace

std::vector<std::string> validate_vtk_text(const std::string& text) {
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (header.size() < 4 && std::getline(in, line))
    header.push_back(line);
  if (header.size() < 4) {
    problems.push_back("fewer than four header lines");
    return problems;
  }
  if (header[0].rfind("# vtk DataFile Version", 0) != 0)
    problems.push_back("bad magic line: '" + header[0] + "'");
  if (header[2] != "ASCII")
    problems.push_back("expected ASCII on line 3");
  if (header[3] != "DATASET UNSTRUCTURED_GRID")
    problems.push_back("expected DATASET UNSTRUCTURED_GRID on line 4");

  TokenCursor c;
  std::string word;
  while (in >> word)
    c.tok.push_back(word);

  long n_points = -1, n_cells = -1;
  auto expect = [&](const char* kw) {
    const std::string* t = c.next();
    if (t == nullptr || *t != kw) {
      problems.push_back(std::string("expected keyword ") + kw +
                         (t != nullptr ? " but found '" + *t + "'" : " but hit end of file"));
      return false;
    }
    return true;
  };
  auto expect_count = [&](long& out, const char* what) {
    const std::string* t = c.next();
    if (t == nullptr || !parse_count(*t, out) || out < 0) {
      problems.push_back(std::string("bad count for ") + what);
      return false;
    }
    return true;
  };

  if (!expect("POINTS") || !expect_count(n_points, "POINTS"))
    return problems;
  c.next(); // datatype
  if (!take_numbers(c, n_points * 3, problems, "POINTS"))
    return problems;

  long cells_sz = 0;
  if (!expect("CELLS") || !expect_count(n_cells, "CELLS") || !expect_count(cells_sz, "CELLS size"))
    return problems;
  long consumed = 0;
  for (long i = 0; i < n_cells; ++i) {
    long nv;
    const std::string* t = c.next();
    if (t == nullptr || !parse_count(*t, nv) || nv < 3) {
      problems.push_back("bad cell record " + std::to_string(i));
      return problems;
    }
    consumed += 1 + nv;
    for (long k = 0; k < nv; ++k) {
      long id;
      t = c.next();
      if (t == nullptr || !parse_count(*t, id) || id < 0 || id >= n_points) {
        problems.push_back("cell " + std::to_string(i) + " references invalid point");
        return problems;
      }
    }
  }
  if (consumed != cells_sz)
    problems.push_back("CELLS size field does not match records");

  long n_types = 0;
  if (!expect("CELL_TYPES") || !expect_count(n_types, "CELL_TYPES"))
    return problems;
  if (n_types != n_cells)
    problems.push_back("CELL_TYPES count differs from CELLS");
  for (long i = 0; i < n_types; ++i) {
    long ty;
    const std::string* t = c.next();
    if (t == nullptr || !parse_count(*t, ty)) {
      problems.push_back("truncated CELL_TYPES");
      return problems;
    }
  }

  // Optional attribute sections, in the order written here.
  long section_n = 0;
  bool in_cell_data = false;
  while (!c.done()) {
    const std::string* t = c.next();
    if (*t == "POINT_DATA" || *t == "CELL_DATA") {
      in_cell_data = (*t == "CELL_DATA");
      long n;
      if (!expect_count(n, t->c_str()))
        return problems;
      const long want = in_cell_data ? n_cells : n_points;
      if (n != want)
        problems.push_back(*t + " count mismatch");
      section_n = n;
    } else if (*t == "VECTORS") {
      c.next(); // name
      c.next(); // datatype
      if (!take_numbers(c, section_n * 3, problems, "VECTORS"))
        return problems;
    } else if (*t == "SCALARS") {
      c.next(); // name
      c.next(); // datatype
      long comps = 1;
      if (!c.done() && parse_count(*c.peek(), comps))
        c.next();
      else
        comps = 1;
      if (!expect("LOOKUP_TABLE"))
        return problems;
      c.next(); // table name
      if (!take_numbers(c, section_n * comps, problems, "SCALARS"))
        return problems;
    } else {
      problems.push_back("unexpected token '" + *t + "'");
      return problems;
    }
  }
  return problems;
}

// ============================================================================
// Stream function and recirculation census
// ============================================================================

StreamFunction stream_function(const FunctionSpace& velocity, std::span<const double> u) {
  const Mesh& mesh = velocity.mesh();
  FunctionSpace psi_space(mesh, 2, 1, SpaceSupport::FluidOnly);
  const int n = psi_space.n_scalar();

  SparsityPattern sp(n, n);
  pattern_cells(sp, psi_space, psi_space, 0, 0);
  CsrMatrix a = sp.build();
  assemble_diffusion(psi_space, 1.0, BlockView{&a}, 2);

  // Vorticity load: integral of (dv/dx - du/dy) * phi.
  std::vector<double> rhs(static_cast<size_t>(n), 0.0);
  const QuadratureRule rule = quadrature_rule(2, 3);
  std::vector<double> shp(6), shp_g(12);
  for (int c : psi_space.active_cells()) {
    const auto dofs = psi_space.cell_dofs(c);
    const double area = mesh.cell_volume(c);
    for (int qp = 0; qp < rule.size(); ++qp) {
      double vals[2], grads[4];
      eval_field(velocity, u, c, rule.point(qp), vals, grads);
      const double omega = grads[2] - grads[1]; // dv/dx - du/dy
      reference_basis_eval(2, 2, rule.point(qp), shp.data(), shp_g.data());
      const double w = rule.weights[static_cast<size_t>(qp)] * 2.0 * area;
      for (int i = 0; i < 6; ++i)
        rhs[static_cast<size_t>(dofs[i])] += w * omega * shp[static_cast<size_t>(i)];
    }
  }

  const std::vector<int> wall = psi_space.dofs_on_tags(fluid_wall_tags());
  const std::vector<double> zeros(wall.size(), 0.0);
  apply_dirichlet(a, rhs, wall, zeros, true);

  StreamFunction sf{std::move(psi_space), std::vector<double>(static_cast<size_t>(n), 0.0), 0.0};
  Ilu0 prec(a);
  GmresOptions go;
  go.rtol = 1.0e-10;
  go.max_iter = 2000;
  go.restart = 200;
  const VectorOp op = [&a](std::span<const double> in, std::span<double> out) {
    a.multiply(in, out);
  };
  const VectorOp pc = [&prec](std::span<const double> in, std::span<double> out) {
    prec.apply(in, out);
  };
  const GmresResult res = gmres(op, rhs, sf.psi, &pc, go);
  if (!res.converged)
    throw std::runtime_error("stream-function solve did not converge");
  for (double v : sf.psi)
    sf.max_abs = std::max(sf.max_abs, std::abs(v));
  return sf;
}

int count_recirculations(const StreamFunction& sf, double threshold) {
  if (sf.max_abs <= 0.0)
    return 0;
  const Mesh& mesh = sf.space.mesh();
  const double thr = threshold * sf.max_abs;

  // Classify cells by the sign of their mean stream function, then count
  // connected same-sign components over shared-edge adjacency.
  std::map<std::pair<int, int>, std::vector<int>> edge_cells;
  std::vector<int> cls(static_cast<size_t>(mesh.n_cells()), 0);
  for (int c : sf.space.active_cells()) {
    const auto dofs = sf.space.cell_dofs(c);
    double mean = 0.0;
    for (int i = 0; i < 6; ++i)
      mean += sf.psi[static_cast<size_t>(dofs[i])];
    mean /= 6.0;
    cls[static_cast<size_t>(c)] = mean > thr ? 1 : (mean < -thr ? -1 : 0);
    const auto cv = mesh.cell(c);
    for (int k = 0; k < 3; ++k) {
      int a = cv[(k + 1) % 3], b = cv[(k + 2) % 3];
      if (a > b)
        std::swap(a, b);
      edge_cells[{a, b}].push_back(c);
    }
  }
  std::vector<std::vector<int>> adj(static_cast<size_t>(mesh.n_cells()));
  for (const auto& [key, cells] : edge_cells)
    if (cells.size() == 2) {
      adj[static_cast<size_t>(cells[0])].push_back(cells[1]);
      adj[static_cast<size_t>(cells[1])].push_back(cells[0]);
    }

  int count = 0;
  std::vector<char> seen(static_cast<size_t>(mesh.n_cells()), 0);
  std::vector<int> stack;
  for (int c : sf.space.active_cells()) {
    if (seen[static_cast<size_t>(c)] || cls[static_cast<size_t>(c)] == 0)
      continue;
    const int sign = cls[static_cast<size_t>(c)];
    ++count;
    stack.assign(1, c);
    seen[static_cast<size_t>(c)] = 1;
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int nb : adj[static_cast<size_t>(cur)])
        if (!seen[static_cast<size_t>(nb)] && cls[static_cast<size_t>(nb)] == sign) {
          seen[static_cast<size_t>(nb)] = 1;
          stack.push_back(nb);
        }
    }
  }
  return count;
}

// ============================================================================
// Line probe
// ============================================================================

namespace {

struct Location {
  int cell = -1;
  double ref[2] = {0.0, 0.0};
  double quality = -1.0e30; // smallest barycentric coordinate
};

Location locate_point(const Mesh& mesh, const double* pt, bool prefer_fluid) {
  Location best, best_fluid;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto cv = mesh.cell(c);
    const double* a = mesh.vertex(cv[0]).data();
    const double* b = mesh.vertex(cv[1]).data();
    const double* d = mesh.vertex(cv[2]).data();
    const double j00 = b[0] - a[0], j01 = d[0] - a[0];
    const double j10 = b[1] - a[1], j11 = d[1] - a[1];
    const double det = j00 * j11 - j01 * j10;
    if (std::abs(det) < 1.0e-300)
      continue;
    const double rx = pt[0] - a[0], ry = pt[1] - a[1];
    const double l1 = (j11 * rx - j01 * ry) / det;
    const double l2 = (-j10 * rx + j00 * ry) / det;
    const double q = std::min({l1, l2, 1.0 - l1 - l2});
    if (q > best.quality) {
      best.cell = c;
      best.ref[0] = l1;
      best.ref[1] = l2;
      best.quality = q;
    }
    if (mesh.cell_region[c] == region::AqueousHumor && q > best_fluid.quality) {
      best_fluid.cell = c;
      best_fluid.ref[0] = l1;
      best_fluid.ref[1] = l2;
      best_fluid.quality = q;
    }
  }
  if (prefer_fluid && best_fluid.cell >= 0 && best_fluid.quality > -1.0e-9)
    return best_fluid;
  return best;
}

} // namespace

std::vector<ProbeSample> probe_line(const CoupledProblem& problem, std::span<const double> x,
                                    const double* a, const double* b, int n,
                                    double pressure_offset_mmhg) {
  if (n < 2)
    throw std::invalid_argument("probe needs at least two samples");
  const Mesh& mesh = problem.temperature_space().mesh();
  const auto u = problem.u_part(x);
  const auto p = problem.p_part(x);
  const auto t = problem.t_part(x);
  const PressureGauge gauge(problem, x, pressure_offset_mmhg);
  std::vector<ProbeSample> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / (n - 1);
    const double pt[2] = {a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])};
    const Location loc = locate_point(mesh, pt, true);
    if (loc.cell < 0)
      throw std::runtime_error("probe point outside mesh");
    ProbeSample s;
    s.s = f * std::hypot(b[0] - a[0], b[1] - a[1]);
    s.x = pt[0];
    s.y = pt[1];
    double tv;
    eval_field(problem.temperature_space(), t, loc.cell, loc.ref, &tv, nullptr);
    s.t = tv;
    s.umag = 0.0;
    s.p_mmhg = 0.0;
    if (mesh.cell_region[loc.cell] == region::AqueousHumor) {
      double uv[2], pv;
      eval_field(problem.velocity_space(), u, loc.cell, loc.ref, uv, nullptr);
      eval_field(problem.pressure_space(), p, loc.cell, loc.ref, &pv, nullptr);
      s.umag = std::hypot(uv[0], uv[1]);
      s.p_mmhg = gauge.display_mmhg(pv, pt);
    }
    out.push_back(s);
  }
  return out;
}

std::string probe_csv_text(const std::vector<ProbeSample>& samples) {
  std::string out = "s,x,y,T_K,umag_mps,p_mmHg\n";
  for (const auto& s : samples)
    out += fmt(s.s) + "," + fmt(s.x) + "," + fmt(s.y) + "," + fmt(s.t) + "," + fmt(s.umag) + "," +
           fmt(s.p_mmhg) + "\n";
  return out;
}

void write_probe_csv(const std::string& path, const std::vector<ProbeSample>& samples) {
  write_text_file(path, probe_csv_text(samples));
}

// ============================================================================
// Scalar metrics
// ============================================================================

FlowMetrics compute_metrics(const CoupledProblem& problem, std::span<const double> x,
                            double pressure_offset_mmhg) {
  const FunctionSpace& v = problem.velocity_space();
  const FunctionSpace& s = problem.temperature_space();
  const Mesh& mesh = s.mesh();
  const auto u = problem.u_part(x);
  const auto p = problem.p_part(x);
  const auto t = problem.t_part(x);

  FlowMetrics m;

  for (int i = 0; i < v.n_scalar(); ++i)
    m.max_speed = std::max(m.max_speed, std::hypot(u[static_cast<size_t>(i) * 2],
                                                   u[static_cast<size_t>(i) * 2 + 1]));
  const QuadratureRule rule = quadrature_rule(2, 6);
  for (int c : v.active_cells())
    for (int qp = 0; qp < rule.size(); ++qp) {
      double uv[2];
      eval_field(v, u, c, rule.point(qp), uv, nullptr);
      m.max_speed = std::max(m.max_speed, std::hypot(uv[0], uv[1]));
    }

  m.t_min = m.t_max = t.empty() ? 0.0 : t[0];
  for (double tv : t) {
    m.t_min = std::min(m.t_min, tv);
    m.t_max = std::max(m.t_max, tv);
  }

  // Axis landmarks: the boundary vertex furthest back and the exposed-surface
  // vertex furthest forward (ties resolved toward the midline).
  {
    std::vector<char> on_boundary(static_cast<size_t>(mesh.n_vertices()), 0);
    std::vector<char> on_exposed(static_cast<size_t>(mesh.n_vertices()), 0);
    for (int f = 0; f < mesh.n_facets(); ++f) {
      const auto fv = mesh.facet(f);
      for (int k = 0; k < 2; ++k) {
        on_boundary[static_cast<size_t>(fv[k])] = 1;
        if (mesh.facet_tag[f] == boundary::GammaAmb)
          on_exposed[static_cast<size_t>(fv[k])] = 1;
      }
    }
    int back = -1, front = -1;
    auto better = [&mesh](int cand, int cur, bool want_min_x) {
      if (cur < 0)
        return true;
      const auto a = mesh.vertex(cand);
      const auto b = mesh.vertex(cur);
      if (a[0] != b[0])
        return want_min_x ? a[0] < b[0] : a[0] > b[0];
      return std::abs(a[1]) < std::abs(b[1]);
    };
    for (int vtx = 0; vtx < mesh.n_vertices(); ++vtx) {
      if (on_boundary[static_cast<size_t>(vtx)] && better(vtx, back, true))
        back = vtx;
      if (on_exposed[static_cast<size_t>(vtx)] && better(vtx, front, false))
        front = vtx;
    }
    if (front < 0)
      front = back;
    if (back >= 0)
      m.t_posterior_pole = t[s.vertex_dof(back)];
    if (front >= 0)
      m.t_corneal_apex = t[s.vertex_dof(front)];
  }

  if (!p.empty()) {
    const PressureGauge gauge(problem, x, pressure_offset_mmhg);
    const auto& qcoords = problem.pressure_space().dof_coords();
    double pmin = 0.0, pmax = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
      const double tot = gauge.total_pa(p[i], &qcoords[i * 2]);
      if (i == 0) {
        pmin = pmax = tot;
      } else {
        pmin = std::min(pmin, tot);
        pmax = std::max(pmax, tot);
      }
    }
    m.p_span_mmhg = (pmax - pmin) / kPascalPerMmHg;
    m.p_min_mmhg = (pmin - gauge.anchor_pa()) / kPascalPerMmHg + pressure_offset_mmhg;
    m.p_max_mmhg = (pmax - gauge.anchor_pa()) / kPascalPerMmHg + pressure_offset_mmhg;
  }

  if (norm2(u) > 0.0) {
    const StreamFunction sf = stream_function(v, u);
    m.recirculation_count = count_recirculations(sf, 0.01);
  }

  // Vertical-velocity averages over the posterior/anterior halves of the
  // fluid, split at the mid-depth of its bounding box.
  {
    double xmin = 0.0, xmax = 0.0;
    bool first = true;
    for (int c : v.active_cells()) {
      const auto cv = mesh.cell(c);
      for (int k = 0; k < 3; ++k) {
        const double cx = mesh.vertex(cv[k])[0];
        if (first || cx < xmin)
          xmin = cx;
        if (first || cx > xmax)
          xmax = cx;
        first = false;
      }
    }
    const double xmid = 0.5 * (xmin + xmax);
    const QuadratureRule r2 = quadrature_rule(2, 2);
    double int_back = 0.0, area_back = 0.0, int_front = 0.0, area_front = 0.0;
    for (int c : v.active_cells()) {
      const auto cv = mesh.cell(c);
      const double cx =
          (mesh.vertex(cv[0])[0] + mesh.vertex(cv[1])[0] + mesh.vertex(cv[2])[0]) / 3.0;
      const double area = mesh.cell_volume(c);
      double acc = 0.0;
      for (int qp = 0; qp < r2.size(); ++qp) {
        double uv[2];
        eval_field(v, u, c, r2.point(qp), uv, nullptr);
        acc += r2.weights[static_cast<size_t>(qp)] * 2.0 * area * uv[1];
      }
      if (cx < xmid) {
        int_back += acc;
        area_back += area;
      } else {
        int_front += acc;
        area_front += area;
      }
      m.fluid_area += area;
    }
    if (area_back > 0.0)
      m.mean_v_back = int_back / area_back;
    if (area_front > 0.0)
      m.mean_v_front = int_front / area_front;
  }

  // L2 norm of the pointwise divergence.
  {
    const QuadratureRule r2 = quadrature_rule(2, 2);
    double acc = 0.0;
    for (int c : v.active_cells()) {
      const double area = mesh.cell_volume(c);
      for (int qp = 0; qp < r2.size(); ++qp) {
        double uv[2], gv[4];
        eval_field(v, u, c, r2.point(qp), uv, gv);
        const double div = gv[0] + gv[3];
        acc += r2.weights[static_cast<size_t>(qp)] * 2.0 * area * div * div;
      }
    }
    m.div_l2 = std::sqrt(acc);
  }

  for (const auto& rb : problem.robin_conditions()) {
    const double fl = robin_flux(s, t, rb.tag, rb.h, rb.t_ext, rb.flux_offset);
    m.boundary_heat_net += fl;
    m.boundary_heat_scale += std::abs(fl);
  }
  return m;
}

std::string metrics_text(const FlowMetrics& m) {
  std::string out;
  out += "max_speed_mps = " + fmt(m.max_speed) + "\n";
  out += "t_min_K = " + fmt(m.t_min) + "\n";
  out += "t_max_K = " + fmt(m.t_max) + "\n";
  out += "t_posterior_pole_K = " + fmt(m.t_posterior_pole) + "\n";
  out += "t_corneal_apex_K = " + fmt(m.t_corneal_apex) + "\n";
  out += "p_span_mmHg = " + fmt(m.p_span_mmhg) + "\n";
  out += "p_min_mmHg = " + fmt(m.p_min_mmhg) + "\n";
  out += "p_max_mmHg = " + fmt(m.p_max_mmhg) + "\n";
  out += "recirculation_count = " + std::to_string(m.recirculation_count) + "\n";
  out += "mean_v_back_mps = " + fmt(m.mean_v_back) + "\n";
  out += "mean_v_front_mps = " + fmt(m.mean_v_front) + "\n";
  out += "fluid_area_m2 = " + fmt(m.fluid_area) + "\n";
  out += "div_l2 = " + fmt(m.div_l2) + "\n";
  out += "boundary_heat_net_W = " + fmt(m.boundary_heat_net) + "\n";
  out += "boundary_heat_scale_W = " + fmt(m.boundary_heat_scale) + "\n";
  return out;
}

} // namespace ocuflow
