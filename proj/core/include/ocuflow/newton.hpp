#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ocuflow {

/// Nonlinear system F(x) = 0 exposed to the Newton driver.
class NewtonProblem {
public:
  virtual ~NewtonProblem() = default;
  virtual int size() const = 0;
  virtual void residual(std::span<const double> x, std::span<double> r) = 0;
  /// Solves J(x) dx = rhs. Called once per Newton iteration, always after a
  /// residual evaluation at the same x.
  virtual void solve_jacobian(std::span<const double> x, std::span<const double> rhs,
                              std::span<double> dx) = 0;
};

struct NewtonOptions {
  double rtol = 1.0e-8;
  double atol = 1.0e-12;
  int max_iter = 25;
  int max_backtracks = 8; ///< step halvings per iteration (Armijo rule)
  std::function<void(int iter, double rnorm, double alpha)> monitor;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history; ///< includes the initial residual
};

/// Damped Newton iteration: x is the initial guess on entry, the solution on
/// exit. Steps are halved until the residual satisfies a relaxed monotonicity
/// bound; after max_backtracks halvings the step is taken as-is.
NewtonReport newton_solve(NewtonProblem& problem, std::span<double> x,
                          const NewtonOptions& opt = {});

} // namespace ocuflow
