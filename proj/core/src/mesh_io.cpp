#include "ocuflow/mesh_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ocuflow {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("msh: " + what);
}

std::string read_quoted(std::istream& in) {
  char c = 0;
  in >> std::ws;
  if (!in.get(c) || c != '"')
    fail("expected quoted physical name");
  std::string name;
  while (in.get(c) && c != '"')
    name.push_back(c);
  if (c != '"')
    fail("unterminated physical name");
  return name;
}

template <class T> T read_value(std::istream& in, const char* what) {
  T v{};
  if (!(in >> v))
    fail(std::string("failed to read ") + what);
  return v;
}

void skip_section(std::istream& in, const std::string& name) {
  const std::string end = "$End" + name;
  std::string tok;
  while (in >> tok)
    if (tok == end)
      return;
  fail("missing " + end);
}

} // namespace

Mesh parse_msh(std::istream& in) {
  Mesh mesh;
  mesh.dim = 2;
  bool saw_format = false;

  std::map<int, std::pair<int, std::string>> physicals;   // phys tag -> (dim, name)
  std::map<std::pair<int, int>, int> entity_physical;     // (dim, entity) -> phys tag
  std::map<long long, int> node_index;                    // msh node tag -> vertex index

  std::string tok;
  while (in >> tok) {
    if (tok == "$MeshFormat") {
      const auto version = read_value<std::string>(in, "format version");
      const auto file_type = read_value<int>(in, "format file type");
      read_value<int>(in, "format data size");
      if (version.rfind("4.1", 0) != 0)
        fail("unsupported format version '" + version + "' (need 4.1)");
      if (file_type != 0)
        fail("binary files are not supported");
      saw_format = true;
      skip_section(in, "MeshFormat");
    } else if (tok == "$PhysicalNames") {
      const auto n = read_value<int>(in, "physical name count");
      for (int i = 0; i < n; ++i) {
        const auto dim = read_value<int>(in, "physical dim");
        const auto tag = read_value<int>(in, "physical tag");
        physicals[tag] = {dim, read_quoted(in)};
      }
      skip_section(in, "PhysicalNames");
    } else if (tok == "$Entities") {
      const auto np = read_value<int>(in, "point count");
      const auto nc = read_value<int>(in, "curve count");
      const auto ns = read_value<int>(in, "surface count");
      const auto nv = read_value<int>(in, "volume count");
      for (int i = 0; i < np; ++i) {
        read_value<int>(in, "point tag");
        for (int k = 0; k < 3; ++k)
          read_value<double>(in, "point coordinate");
        const auto nphys = read_value<int>(in, "point physical count");
        for (int k = 0; k < nphys; ++k)
          read_value<int>(in, "point physical tag");
      }
      const auto read_entity = [&](int dim, const char* kind) {
        const auto tag = read_value<int>(in, kind);
        for (int k = 0; k < 6; ++k)
          read_value<double>(in, "bounding box");
        const auto nphys = read_value<int>(in, "physical count");
        for (int k = 0; k < nphys; ++k) {
          const auto p = read_value<int>(in, "physical tag");
          if (k == 0)
            entity_physical[{dim, tag}] = p;
        }
        const auto nb = read_value<int>(in, "bounding entity count");
        for (int k = 0; k < nb; ++k)
          read_value<int>(in, "bounding entity");
      };
      for (int i = 0; i < nc; ++i)
        read_entity(1, "curve tag");
      for (int i = 0; i < ns; ++i)
        read_entity(2, "surface tag");
      if (nv != 0)
        fail("volume entities are not supported");
      skip_section(in, "Entities");
    } else if (tok == "$Nodes") {
      const auto nblocks = read_value<int>(in, "node block count");
      read_value<long long>(in, "node count");
      read_value<long long>(in, "min node tag");
      read_value<long long>(in, "max node tag");
      for (int b = 0; b < nblocks; ++b) {
        read_value<int>(in, "node entity dim");
        read_value<int>(in, "node entity tag");
        const auto parametric = read_value<int>(in, "parametric flag");
        if (parametric != 0)
          fail("parametric nodes are not supported");
        const auto n = read_value<long long>(in, "block node count");
        std::vector<long long> tags(static_cast<size_t>(n));
        for (auto& t : tags)
          t = read_value<long long>(in, "node tag");
        for (const auto t : tags) {
          const auto x = read_value<double>(in, "node x");
          const auto y = read_value<double>(in, "node y");
          const auto z = read_value<double>(in, "node z");
          if (std::abs(z) > 1.0e-12)
            fail("nodes must lie in the z = 0 plane");
          if (!node_index.emplace(t, static_cast<int>(node_index.size())).second)
            fail("duplicate node tag " + std::to_string(t));
          mesh.coords.push_back(x);
          mesh.coords.push_back(y);
        }
      }
      skip_section(in, "Nodes");
    } else if (tok == "$Elements") {
      const auto resolve = [&](int dim, int entity, bool cell) {
        const auto ep = entity_physical.find({dim, entity});
        if (ep == entity_physical.end())
          fail("entity (" + std::to_string(dim) + ", " + std::to_string(entity) +
               ") carries elements but no physical group");
        const auto ph = physicals.find(ep->second);
        if (ph == physicals.end())
          fail("physical tag " + std::to_string(ep->second) + " has no name");
        const std::string& name = ph->second.second;
        const auto id = cell ? region_id(name) : boundary_id(name);
        if (!id)
          fail("unmapped physical name '" + name + "'");
        return *id;
      };
      const auto node_of = [&](long long t) {
        const auto it = node_index.find(t);
        if (it == node_index.end())
          fail("element references unknown node " + std::to_string(t));
        return it->second;
      };
      const auto nblocks = read_value<int>(in, "element block count");
      read_value<long long>(in, "element count");
      read_value<long long>(in, "min element tag");
      read_value<long long>(in, "max element tag");
      for (int b = 0; b < nblocks; ++b) {
        const auto dim = read_value<int>(in, "element entity dim");
        const auto entity = read_value<int>(in, "element entity tag");
        const auto type = read_value<int>(in, "element type");
        const auto n = read_value<long long>(in, "block element count");
        if (type == 1 || type == 2) {
          const int nodes_per = type == 1 ? 2 : 3;
          const int id = resolve(dim, entity, type == 2);
          for (long long e = 0; e < n; ++e) {
            read_value<long long>(in, "element tag");
            int vs[3] = {0, 0, 0};
            for (int k = 0; k < nodes_per; ++k)
              vs[k] = node_of(read_value<long long>(in, "element node"));
            if (type == 2) {
              mesh.cells.insert(mesh.cells.end(), {vs[0], vs[1], vs[2]});
              mesh.cell_region.push_back(id);
            } else {
              mesh.facets.insert(mesh.facets.end(), {vs[0], vs[1]});
              mesh.facet_tag.push_back(id);
            }
          }
        } else if (type == 15) { // isolated point elements carry no data we use
          for (long long e = 0; e < n; ++e) {
            read_value<long long>(in, "element tag");
            read_value<long long>(in, "element node");
          }
        } else {
          fail("non-simplex element type " + std::to_string(type));
        }
      }
      skip_section(in, "Elements");
    } else if (!tok.empty() && tok[0] == '$' && tok.rfind("$End", 0) != 0) {
      skip_section(in, tok.substr(1));
    }
  }
  if (!saw_format)
    fail("missing $MeshFormat section");
  if (mesh.cell_region.empty())
    fail("file contains no triangles");
  return mesh;
}

Mesh read_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open mesh file '" + path + "'");
  return parse_msh(in);
}

void print_msh(const Mesh& mesh, std::ostream& out) {
  if (mesh.dim != 2)
    throw std::runtime_error("msh writer handles 2d meshes only");
  std::set<int> regions(mesh.cell_region.begin(), mesh.cell_region.end());
  std::set<int> tags(mesh.facet_tag.begin(), mesh.facet_tag.end());

  out << "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";

  // Physical groups: region r -> tag r+1 (dim 2), boundary t -> tag 101+t (dim 1).
  out << "$PhysicalNames\n" << regions.size() + tags.size() << "\n";
  for (int t : tags)
    out << "1 " << 101 + t << " \"" << boundary_name(t) << "\"\n";
  for (int r : regions)
    out << "2 " << r + 1 << " \"" << region_name(r) << "\"\n";
  out << "$EndPhysicalNames\n";

  out << "$Entities\n0 " << tags.size() << ' ' << regions.size() << " 0\n";
  for (int t : tags)
    out << t + 1 << " 0 0 0 0 0 0 1 " << 101 + t << " 0\n";
  for (int r : regions)
    out << r + 1 << " 0 0 0 0 0 0 1 " << r + 1 << " 0\n";
  out << "$EndEntities\n";

  const int nv = mesh.n_vertices();
  out << "$Nodes\n1 " << nv << " 1 " << nv << "\n";
  out << "2 " << *regions.begin() + 1 << " 0 " << nv << "\n";
  for (int v = 0; v < nv; ++v)
    out << v + 1 << "\n";
  out << std::setprecision(17);
  for (int v = 0; v < nv; ++v)
    out << mesh.coords[static_cast<size_t>(v) * 2] << ' '
        << mesh.coords[static_cast<size_t>(v) * 2 + 1] << " 0\n";
  out << "$EndNodes\n";

  const size_t nblocks = tags.size() + regions.size();
  const long long nelem = mesh.n_cells() + mesh.n_facets();
  out << "$Elements\n" << nblocks << ' ' << nelem << " 1 " << nelem << "\n";
  long long next_tag = 1;
  for (int t : tags) {
    long long count = 0;
    for (int f = 0; f < mesh.n_facets(); ++f)
      if (mesh.facet_tag[static_cast<size_t>(f)] == t)
        ++count;
    out << "1 " << t + 1 << " 1 " << count << "\n";
    for (int f = 0; f < mesh.n_facets(); ++f)
      if (mesh.facet_tag[static_cast<size_t>(f)] == t) {
        const auto fv = mesh.facet(f);
        out << next_tag++ << ' ' << fv[0] + 1 << ' ' << fv[1] + 1 << "\n";
      }
  }
  for (int r : regions) {
    long long count = 0;
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (mesh.cell_region[static_cast<size_t>(c)] == r)
        ++count;
    out << "2 " << r + 1 << " 2 " << count << "\n";
    for (int c = 0; c < mesh.n_cells(); ++c)
      if (mesh.cell_region[static_cast<size_t>(c)] == r) {
        const auto cv = mesh.cell(c);
        out << next_tag++ << ' ' << cv[0] + 1 << ' ' << cv[1] + 1 << ' ' << cv[2] + 1 << "\n";
      }
  }
  out << "$EndElements\n";
}

void write_msh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  print_msh(mesh, out);
  if (!out)
    throw std::runtime_error("failed writing mesh to '" + path + "'");
}

} // namespace ocuflow
