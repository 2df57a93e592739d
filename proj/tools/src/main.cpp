// ============================================================================
// ocuflow command line: mesh generation, coupled solves, verification suites.
// ============================================================================

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocuflow/config.hpp"
#include "ocuflow/mesh_io.hpp"
#include "ocuflow/scenario.hpp"
#include "ocuflow/verification.hpp"

namespace {

int cmd_mesh(const std::string& config_path, const std::string& out_path) {
  const ocuflow::Config cfg = ocuflow::load_config(config_path);
  const ocuflow::Mesh mesh = ocuflow::build_eye_mesh(cfg.geometry);
  const auto violations = ocuflow::mesh_validate(mesh);
  for (const auto& v : violations)
    std::fprintf(stderr, "violation: %s\n", v.message.c_str());
  if (!violations.empty())
    return 1;
  ocuflow::write_msh(mesh, out_path);
  std::printf("wrote %s: %d vertices, %d triangles, %d boundary facets\n", out_path.c_str(),
              mesh.n_vertices(), mesh.n_cells(), mesh.n_facets());
  return 0;
}

int cmd_solve(const std::string& config_path, const std::string& posture_name,
              const std::string& mesh_path, const std::string& out_dir, bool dump_matrices,
              int threads) {
  ocuflow::Config cfg = ocuflow::load_config(config_path);
  if (threads > 0)
    cfg.solver.threads = threads;
  const ocuflow::Posture posture = ocuflow::posture_from_name(posture_name);

  ocuflow::ScenarioRun run = ocuflow::run_scenario(cfg, posture, mesh_path);
  std::printf("%s", run.convergence_log.c_str());
  std::printf("%s", ocuflow::metrics_text(run.metrics).c_str());

  if (!out_dir.empty()) {
    ocuflow::write_scenario_outputs(run, cfg, out_dir);
    if (dump_matrices) {
      const ocuflow::CsrMatrix& jac = run.problem->assemble_jacobian(run.x);
      namespace fs = std::filesystem;
      ocuflow::write_matrix_market(jac, (fs::path(out_dir) / "jacobian.mtx").string());
      ocuflow::write_matrix_market(run.problem->divergence_matrix(),
                                   (fs::path(out_dir) / "divergence.mtx").string());
    }
    std::printf("outputs written to %s\n", out_dir.c_str());
  }
  return 0;
}

bool check(bool ok, const char* what) {
  std::printf("%-58s %s\n", what, ok ? "ok" : "FAIL");
  return ok;
}

int cmd_verify(const std::string& suite) {
  bool all_ok = true;
  if (suite == "mms" || suite == "all") {
    const ocuflow::MmsReport exact = ocuflow::mms_exact_reproduction(8);
    std::printf("reproduction errors: u %.3e  p %.3e  T %.3e\n", exact.levels[0].err_u,
                exact.levels[0].err_p, exact.levels[0].err_t);
    all_ok &= check(exact.levels[0].err_u < 1e-7 && exact.levels[0].err_p < 1e-6 &&
                        exact.levels[0].err_t < 1e-7,
                    "polynomial solution reproduced to solver tolerance");

    const std::vector<int> ns{8, 16, 32};
    const ocuflow::MmsReport conv = ocuflow::mms_convergence(ns);
    for (const auto& l : conv.levels)
      std::printf("h = %-8g  err_u %.3e  err_p %.3e  err_T %.3e\n", l.h, l.err_u, l.err_p,
                  l.err_t);
    std::printf("observed orders: u %.2f  p %.2f  T %.2f\n", conv.rate_u, conv.rate_p,
                conv.rate_t);
    all_ok &= check(conv.rate_u > 2.7 && conv.rate_t > 2.7 && conv.rate_p > 1.7,
                    "convergence orders match the elements");
  }
  if (suite == "cavity" || suite == "all") {
    const ocuflow::CavityReport c16 = ocuflow::cavity_benchmark(16);
    const ocuflow::CavityReport c32 = ocuflow::cavity_benchmark(32);
    const double nu_ref = ocuflow::richardson_limit(c16.nu_hot, c32.nu_hot, 2.0);
    std::printf("cavity Nu: n=16 %.5f  n=32 %.5f  extrapolated %.5f\n", c16.nu_hot, c32.nu_hot,
                nu_ref);
    std::printf("midline peaks (n=32): |u|max %.4f  |v|max %.4f\n", c32.u_max_mid, c32.v_max_mid);
    all_ok &= check(std::abs(nu_ref - 1.118) / 1.118 < 0.02, "wall heat flux matches benchmark");
    all_ok &= check(std::abs(c32.u_max_mid - 3.649) / 3.649 < 0.05 &&
                        std::abs(c32.v_max_mid - 3.697) / 3.697 < 0.05,
                    "midline velocity peaks match benchmark");
  }
  if (suite == "hydrostatic" || suite == "all") {
    const ocuflow::HydrostaticReport h = ocuflow::hydrostatic_check(16);
    std::printf("rest state: |u| %.3e  p error %.3e  span %.6f Pa (exact %.6f)\n", h.u_norm,
                h.p_err, h.span_pa, h.exact_span_pa);
    all_ok &= check(h.u_norm < 1e-10, "velocity vanishes at rest");
    all_ok &= check(h.p_err < 1e-8 * h.exact_span_pa, "hydrostatic pressure is exactly linear");
  }
  return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled aqueous-humor flow / heat-transport simulator"};
  app.require_subcommand(1);

  std::string config_path, mesh_path, out_dir, posture = "standing", suite = "all";
  bool dump_matrices = false;
  int threads = 0;

  CLI::App* mesh_cmd = app.add_subcommand("mesh", "generate the cross-section mesh");
  mesh_cmd->add_option("--config", config_path, "configuration file")->required();
  std::string mesh_out = "eye.msh";
  mesh_cmd->add_option("--out", mesh_out, "output .msh path");

  CLI::App* solve_cmd = app.add_subcommand("solve", "run a coupled steady solve");
  solve_cmd->add_option("--config", config_path, "configuration file")->required();
  solve_cmd->add_option("--posture", posture, "standing | prone | supine");
  solve_cmd->add_option("--mesh", mesh_path, "load this .msh instead of meshing internally");
  solve_cmd->add_option("--out", out_dir, "output directory (vtk, metrics, probe)");
  solve_cmd->add_flag("--dump-matrices", dump_matrices, "also write MatrixMarket operators");
  solve_cmd->add_option("--threads", threads, "override worker count");

  CLI::App* verify_cmd = app.add_subcommand("verify", "run built-in verification problems");
  verify_cmd->add_option("--suite", suite, "mms | cavity | hydrostatic | all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mesh_cmd->parsed())
      return cmd_mesh(config_path, mesh_out);
    if (solve_cmd->parsed())
      return cmd_solve(config_path, posture, mesh_path, out_dir, dump_matrices, threads);
    if (verify_cmd->parsed())
      return cmd_verify(suite);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
