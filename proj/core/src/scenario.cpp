#include "ocuflow/scenario.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ocuflow/mesh_io.hpp"
#include "ocuflow/parallel.hpp"

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

ScenarioRun run_scenario(const Config& config, Posture posture, const std::string& mesh_path) {
  set_thread_count(config.solver.threads);

  ScenarioRun run;
  run.posture = posture;
  if (mesh_path.empty())
    run.mesh = std::make_unique<Mesh>(build_eye_mesh(config.geometry));
  else
    run.mesh = std::make_unique<Mesh>(read_msh(mesh_path));
  mesh_validate(*run.mesh);

  CoupledOptions opt = to_coupled_options(config.solver);
  std::string* log = &run.convergence_log;
  opt.newton.monitor = [log](int iter, double rnorm, double alpha) {
    *log += "newton " + std::to_string(iter) + " residual " + fmt(rnorm) + " step " + fmt(alpha) +
            "\n";
  };

  run.problem = std::make_unique<CoupledProblem>(*run.mesh, config.physics, posture, opt);
  if (config.ambient_reference == "blood") {
    // Exchange on the exposed surface referenced to body temperature instead
    // of the surrounding air.
    const PhysicalParams& ph = config.physics;
    run.problem->clear_robin();
    run.problem->add_robin(boundary::GammaBody, ph.h_bl, ph.t_bl, 0.0);
    run.problem->add_robin(boundary::GammaAmb, ph.h_amb + ph.h_r, ph.t_bl, ph.evap);
  }

  run.report = run.problem->solve(run.x);
  if (!run.report.converged)
    throw std::runtime_error("nonlinear solve did not converge after " +
                             std::to_string(run.report.iterations) + " iterations");
  run.metrics = compute_metrics(*run.problem, run.x, config.output.pressure_offset_mmhg);
  return run;
}

void write_scenario_outputs(const ScenarioRun& run, const Config& config,
                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&out_dir](const char* name) { return (fs::path(out_dir) / name).string(); };

  if (config.output.write_vtk)
    write_solution_vtk(path("solution.vtk"), *run.problem, run.x,
                       config.output.pressure_offset_mmhg);

  if (config.output.write_metrics) {
    std::string text = "posture = " + std::string(posture_name(run.posture)) + "\n";
    text += metrics_text(run.metrics);
    text += "newton_iterations = " + std::to_string(run.report.iterations) + "\n";
    write_text_file(path("metrics.txt"), text);
  }

  if (config.output.write_probe) {
    // Midline probe across the full anterior-posterior extent.
    const Mesh& mesh = *run.mesh;
    double xmin = mesh.coords[0], xmax = mesh.coords[0];
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      const double cx = mesh.coords[static_cast<size_t>(v) * 2];
      xmin = std::min(xmin, cx);
      xmax = std::max(xmax, cx);
    }
    const double a[2] = {xmin, 0.0};
    const double b[2] = {xmax, 0.0};
    const auto samples = probe_line(*run.problem, run.x, a, b, config.output.probe_samples,
                                    config.output.pressure_offset_mmhg);
    write_probe_csv(path("probe_axis.csv"), samples);
  }

  std::string conv = run.convergence_log;
  conv += run.report.converged ? "converged\n" : "not converged\n";
  write_text_file(path("convergence.txt"), conv);
}

} // namespace ocuflow
