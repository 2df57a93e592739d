#pragma once

#include <memory>
#include <string>

#include "ocuflow/config.hpp"
#include "ocuflow/coupled.hpp"
#include "ocuflow/eye_geometry.hpp"
#include "ocuflow/postproc.hpp"

namespace ocuflow {

/// One solved configuration: mesh, problem, state vector and derived metrics.
/// Mesh and problem live behind pointers so the bundle can move without
/// invalidating the internal references.
struct ScenarioRun {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<CoupledProblem> problem;
  std::vector<double> x;
  NewtonReport report;
  FlowMetrics metrics;
  std::string convergence_log;
  Posture posture = Posture::Standing;
};

/// Builds (or loads, when `mesh_path` is non-empty) the mesh, configures the
/// coupled problem per the config, solves it and computes the metrics.
/// Throws if the nonlinear solve fails to converge.
ScenarioRun run_scenario(const Config& config, Posture posture,
                         const std::string& mesh_path = "");

/// Writes solution.vtk, metrics.txt, probe_axis.csv and convergence.txt into
/// `out_dir` (created if missing), honoring the output toggles in the config.
void write_scenario_outputs(const ScenarioRun& run, const Config& config,
                            const std::string& out_dir);

} // namespace ocuflow
