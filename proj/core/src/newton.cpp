#include "ocuflow/newton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ocuflow/csr.hpp"

namespace ocuflow {

NewtonReport newton_solve(NewtonProblem& problem, std::span<double> x, const NewtonOptions& opt) {
  const size_t n = static_cast<size_t>(problem.size());
  if (x.size() != n)
    throw std::invalid_argument("newton: state size mismatch");
  std::vector<double> r(n), rhs(n), dx(n), trial(n), rt(n);

  NewtonReport report;
  problem.residual(x, r);
  double rnorm = norm2(r);
  if (!std::isfinite(rnorm))
    throw std::runtime_error("newton: initial residual is not finite");
  report.residual_history.push_back(rnorm);
  const double tol = std::max(opt.rtol * rnorm, opt.atol);
  if (opt.monitor)
    opt.monitor(0, rnorm, 1.0);
  if (rnorm <= tol) {
    report.converged = true;
    return report;
  }

  for (int it = 1; it <= opt.max_iter; ++it) {
    for (size_t i = 0; i < n; ++i)
      rhs[i] = -r[i];
    problem.solve_jacobian(x, rhs, dx);

    // Armijo backtracking on the residual norm.
    double alpha = 1.0;
    double trial_norm = rnorm;
    for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
      for (size_t i = 0; i < n; ++i)
        trial[i] = x[i] + alpha * dx[i];
      problem.residual(trial, rt);
      trial_norm = norm2(rt);
      if (std::isfinite(trial_norm) && trial_norm <= (1.0 - 1.0e-4 * alpha) * rnorm)
        break;
      if (bt == opt.max_backtracks)
        break; // take the last step regardless
      alpha *= 0.5;
    }
    if (!std::isfinite(trial_norm))
      throw std::runtime_error("newton: residual became non-finite");
    std::copy(trial.begin(), trial.end(), x.begin());
    std::copy(rt.begin(), rt.end(), r.begin());
    rnorm = trial_norm;
    report.iterations = it;
    report.residual_history.push_back(rnorm);
    if (opt.monitor)
      opt.monitor(it, rnorm, alpha);
    if (rnorm <= tol) {
      report.converged = true;
      return report;
    }
  }
  return report;
}

} // namespace ocuflow
