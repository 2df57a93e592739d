#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ocuflow {

/// Action of a linear operator: z = Op(r). Output span is pre-sized.
using VectorOp = std::function<void(std::span<const double>, std::span<double>)>;

struct GmresOptions {
  double rtol = 1e-8;   // convergence on ||b - A x|| <= max(rtol * ||b||, atol)
  double atol = 0.0;
  int max_iter = 500;   // total iterations across restart cycles
  int restart = 100;
};

struct GmresResult {
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history; // true residual norms, starting at ||r0||
};

/// Restarted GMRES, right-preconditioned when `prec` is non-null. The
/// preconditioned directions are stored explicitly (flexible variant), so
/// `prec` may itself be an inexact iterative solve. Throws on NaN/Inf
/// breakdown. With b = 0 the solution x = 0 is returned immediately.
GmresResult gmres(const VectorOp& op, std::span<const double> b, std::span<double> x,
                  const VectorOp* prec, const GmresOptions& opt);

} // namespace ocuflow
