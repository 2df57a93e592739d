#pragma once

#include <string>

#include "ocuflow/coupled.hpp"
#include "ocuflow/eye_geometry.hpp"
#include "ocuflow/physics.hpp"

namespace ocuflow {

struct SolverConfig {
  double newton_rtol = 1.0e-8;
  double newton_atol = 1.0e-12;
  int newton_max_iter = 25;
  int newton_max_backtracks = 8;
  double linear_rtol = 1.0e-8;
  int gmres_restart = 100;
  int gmres_max_iter = 500;
  double inner_tol = 1.0e-2;
  int inner_max_iter = 200;
  std::string schur = "pcd";      ///< pcd | mass
  std::string subsolver = "ilu0"; ///< ilu0 | asm2
  int threads = 1;
};

struct OutputConfig {
  int probe_samples = 200;
  double pressure_offset_mmhg = 15.5; ///< additive display offset for pressure
  bool write_vtk = true;
  bool write_probe = true;
  bool write_metrics = true;
};

/// Flat key = value file with [physics] [geometry] [solver] [output]
/// sections, '#' comments and SI units throughout. Unknown sections or keys
/// are errors; so are missing solid conductivities when loading from disk.
struct Config {
  PhysicalParams physics;
  std::string ambient_reference = "ambient"; ///< ambient | blood exchange temperature
  EyeGeometry geometry;
  SolverConfig solver;
  OutputConfig output;
};

/// Parses config text; throws std::runtime_error with a line number on
/// malformed input. Does not enforce completeness.
Config parse_config(const std::string& text);

/// Reads and parses a file, then checks it is solvable: all six regional
/// conductivities set, valid geometry, recognized option names.
Config load_config(const std::string& path);

/// Emits the full key set; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const Config& config);

/// Validates enum-like fields and positive conductivities.
void check_config(const Config& config);

CoupledOptions to_coupled_options(const SolverConfig& solver);

} // namespace ocuflow
