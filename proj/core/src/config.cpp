#include "ocuflow/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ocuflow {

namespace {

using Setter = std::function<void(Config&, const std::string&)>;
using Getter = std::function<std::string(const Config&)>;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument("trailing characters in number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size())
    throw std::invalid_argument("trailing characters in integer '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1")
    return true;
  if (s == "false" || s == "0")
    return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

struct Entry {
  Setter set;
  Getter get;
};

Entry dbl(double* (*field)(Config&)) {
  return {[field](Config& c, const std::string& v) { *field(c) = parse_double(v); },
          [field](const Config& c) { return format_double(*field(const_cast<Config&>(c))); }};
}

Entry integer(int* (*field)(Config&)) {
  return {[field](Config& c, const std::string& v) { *field(c) = parse_int(v); },
          [field](const Config& c) { return std::to_string(*field(const_cast<Config&>(c))); }};
}

Entry boolean(bool* (*field)(Config&)) {
  return {[field](Config& c, const std::string& v) { *field(c) = parse_bool(v); },
          [field](const Config& c) {
            return *field(const_cast<Config&>(c)) ? std::string("true") : std::string("false");
          }};
}

Entry str(std::string* (*field)(Config&)) {
  return {[field](Config& c, const std::string& v) { *field(c) = v; },
          [field](const Config& c) { return *field(const_cast<Config&>(c)); }};
}

// Section -> ordered key table. Function-pointer accessors keep the table
// plain data (no captures), which also fixes the serialization order.
using Section = std::vector<std::pair<std::string, Entry>>;

#define OC_DBL(path) dbl(+[](Config& c) { return &(c.path); })
#define OC_INT(path) integer(+[](Config& c) { return &(c.path); })
#define OC_BOOL(path) boolean(+[](Config& c) { return &(c.path); })
#define OC_STR(path) str(+[](Config& c) { return &(c.path); })

const std::vector<std::pair<std::string, Section>>& schema() {
  static const std::vector<std::pair<std::string, Section>> s = {
      {"physics",
       {
           {"mu", OC_DBL(physics.mu)},
           {"rho", OC_DBL(physics.rho)},
           {"cp", OC_DBL(physics.cp)},
           {"beta", OC_DBL(physics.beta)},
           {"k_ah", OC_DBL(physics.k_ah)},
           {"g", OC_DBL(physics.g)},
           {"t_ref", OC_DBL(physics.t_ref)},
           {"k_cornea", OC_DBL(physics.k_cornea)},
           {"k_iris", OC_DBL(physics.k_iris)},
           {"k_lens", OC_DBL(physics.k_lens)},
           {"k_vitreous", OC_DBL(physics.k_vitreous)},
           {"k_outershell", OC_DBL(physics.k_outershell)},
           {"h_bl", OC_DBL(physics.h_bl)},
           {"t_bl", OC_DBL(physics.t_bl)},
           {"h_amb", OC_DBL(physics.h_amb)},
           {"h_r", OC_DBL(physics.h_r)},
           {"evap", OC_DBL(physics.evap)},
           {"t_amb", OC_DBL(physics.t_amb)},
           {"h_uveal", OC_DBL(physics.h_uveal)},
           {"ambient_reference", OC_STR(ambient_reference)},
       }},
      {"geometry",
       {
           {"mesh_size", OC_DBL(geometry.mesh_size)},
           {"height", OC_DBL(geometry.height)},
           {"shell_thickness", OC_DBL(geometry.shell_thickness)},
           {"vitreous_width", OC_DBL(geometry.vitreous_width)},
           {"lens_width", OC_DBL(geometry.lens_width)},
           {"pc_width", OC_DBL(geometry.pc_width)},
           {"iris_width", OC_DBL(geometry.iris_width)},
           {"ac_width", OC_DBL(geometry.ac_width)},
           {"cornea_bulge", OC_DBL(geometry.cornea_bulge)},
           {"cornea_thickness", OC_DBL(geometry.cornea_thickness)},
           {"pupil_half_height", OC_DBL(geometry.pupil_half_height)},
           {"lens_half_height", OC_DBL(geometry.lens_half_height)},
           {"chamber_half_height", OC_DBL(geometry.chamber_half_height)},
           {"ambient_strip", OC_DBL(geometry.ambient_strip)},
       }},
      {"solver",
       {
           {"newton_rtol", OC_DBL(solver.newton_rtol)},
           {"newton_atol", OC_DBL(solver.newton_atol)},
           {"newton_max_iter", OC_INT(solver.newton_max_iter)},
           {"newton_max_backtracks", OC_INT(solver.newton_max_backtracks)},
           {"linear_rtol", OC_DBL(solver.linear_rtol)},
           {"gmres_restart", OC_INT(solver.gmres_restart)},
           {"gmres_max_iter", OC_INT(solver.gmres_max_iter)},
           {"inner_tol", OC_DBL(solver.inner_tol)},
           {"inner_max_iter", OC_INT(solver.inner_max_iter)},
           {"schur", OC_STR(solver.schur)},
           {"subsolver", OC_STR(solver.subsolver)},
           {"threads", OC_INT(solver.threads)},
       }},
      {"output",
       {
           {"probe_samples", OC_INT(output.probe_samples)},
           {"pressure_offset_mmhg", OC_DBL(output.pressure_offset_mmhg)},
           {"write_vtk", OC_BOOL(output.write_vtk)},
           {"write_probe", OC_BOOL(output.write_probe)},
           {"write_metrics", OC_BOOL(output.write_metrics)},
       }},
  };
  return s;
}

#undef OC_DBL
#undef OC_INT
#undef OC_BOOL
#undef OC_STR

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

Config parse_config(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string line;
  const Section* section = nullptr;
  std::string section_name;
  int lineno = 0;
  const auto err = [&lineno](const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        err("malformed section header '" + line + "'");
      section_name = trim(line.substr(1, line.size() - 2));
      section = nullptr;
      for (const auto& [name, sec] : schema())
        if (name == section_name)
          section = &sec;
      if (section == nullptr)
        err("unknown section '" + section_name + "'");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      err("expected key = value, got '" + line + "'");
    if (section == nullptr)
      err("key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty())
      err("empty value for key '" + key + "'");
    const Entry* entry = nullptr;
    for (const auto& [k, e] : *section)
      if (k == key)
        entry = &e;
    if (entry == nullptr)
      err("unknown key '" + key + "' in section [" + section_name + "]");
    try {
      entry->set(config, value);
    } catch (const std::exception& ex) {
      err(std::string(ex.what()));
    }
  }
  return config;
}

void check_config(const Config& config) {
  config.physics.conductivity_by_region();
  config.geometry.validate();
  if (config.solver.schur != "pcd" && config.solver.schur != "mass")
    throw std::runtime_error("solver.schur must be 'pcd' or 'mass', got '" + config.solver.schur +
                             "'");
  if (config.solver.subsolver != "ilu0" && config.solver.subsolver != "asm2")
    throw std::runtime_error("solver.subsolver must be 'ilu0' or 'asm2', got '" +
                             config.solver.subsolver + "'");
  if (config.ambient_reference != "ambient" && config.ambient_reference != "blood")
    throw std::runtime_error("physics.ambient_reference must be 'ambient' or 'blood', got '" +
                             config.ambient_reference + "'");
  if (config.solver.threads < 1)
    throw std::runtime_error("solver.threads must be at least 1");
  if (config.output.probe_samples < 2)
    throw std::runtime_error("output.probe_samples must be at least 2");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Config config = parse_config(buf.str());
  check_config(config);
  return config;
}

std::string serialize_config(const Config& config) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, sec] : schema()) {
    if (!first)
      out << "\n";
    first = false;
    out << "[" << name << "]\n";
    for (const auto& [key, entry] : sec)
      out << key << " = " << entry.get(config) << "\n";
  }
  return out.str();
}

CoupledOptions to_coupled_options(const SolverConfig& solver) {
  CoupledOptions opt;
  opt.lin_rtol = solver.linear_rtol;
  opt.gmres_restart = solver.gmres_restart;
  opt.gmres_max_iter = solver.gmres_max_iter;
  opt.precond.inner_tol = solver.inner_tol;
  opt.precond.inner_max_iter = solver.inner_max_iter;
  opt.precond.schur = solver.schur == "mass" ? SchurKind::Mass : SchurKind::Pcd;
  opt.precond.subsolver =
      solver.subsolver == "asm2" ? LocalSolverKind::AdditiveSchwarz2 : LocalSolverKind::Ilu0;
  opt.newton.rtol = solver.newton_rtol;
  opt.newton.atol = solver.newton_atol;
  opt.newton.max_iter = solver.newton_max_iter;
  opt.newton.max_backtracks = solver.newton_max_backtracks;
  return opt;
}

} // namespace ocuflow
