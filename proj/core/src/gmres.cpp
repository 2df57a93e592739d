#include "ocuflow/gmres.hpp"

#include <cmath>
#include <stdexcept>

#include "ocuflow/csr.hpp"

namespace ocuflow {

GmresResult gmres(const VectorOp& op, std::span<const double> b, std::span<double> x,
                  const VectorOp* prec, const GmresOptions& opt) {
  const std::size_t n = b.size();
  const int m = opt.restart < 1 ? 1 : opt.restart;
  GmresResult res;

  const double bnorm = norm2(b);
  if (!std::isfinite(bnorm)) throw std::runtime_error("gmres: right-hand side not finite");
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    res.residual_history.push_back(0.0);
    return res;
  }
  const double tol = std::max(opt.rtol * bnorm, opt.atol);

  std::vector<double> r(n), w(n);
  std::vector<std::vector<double>> V, Z;
  std::vector<double> H((std::size_t)(m + 1) * m, 0.0); // column-major H(i, j) = H[j*(m+1)+i]
  std::vector<double> cs(m), sn(m), g(m + 1);

  auto true_residual = [&]() {
    op(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    return norm2(r);
  };

  double rho = true_residual();
  res.residual_history.push_back(rho);

  while (rho > tol && res.iterations < opt.max_iter) {
    V.assign(1, r);
    scale(1.0 / rho, V[0]);
    Z.clear();
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rho;

    int j = 0;
    for (; j < m && res.iterations < opt.max_iter; ++j) {
      Z.emplace_back(n);
      if (prec)
        (*prec)(V[j], Z[j]);
      else
        Z[j] = V[j];
      op(Z[j], w);

      // modified Gram-Schmidt
      for (int i = 0; i <= j; ++i) {
        const double h = dot(w, V[i]);
        H[(std::size_t)j * (m + 1) + i] = h;
        axpy(-h, V[i], w);
      }
      double hnext = norm2(w);
      if (!std::isfinite(hnext)) throw std::runtime_error("gmres: breakdown (non-finite norm)");
      H[(std::size_t)j * (m + 1) + j + 1] = hnext;

      // apply accumulated Givens rotations to the new column
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H[(std::size_t)j * (m + 1) + i] + sn[i] * H[(std::size_t)j * (m + 1) + i + 1];
        H[(std::size_t)j * (m + 1) + i + 1] =
            -sn[i] * H[(std::size_t)j * (m + 1) + i] + cs[i] * H[(std::size_t)j * (m + 1) + i + 1];
        H[(std::size_t)j * (m + 1) + i] = t;
      }
      const double hj = H[(std::size_t)j * (m + 1) + j];
      const double denom = std::sqrt(hj * hj + hnext * hnext);
      if (denom == 0.0) throw std::runtime_error("gmres: breakdown (zero rotation)");
      cs[j] = hj / denom;
      sn[j] = hnext / denom;
      H[(std::size_t)j * (m + 1) + j] = denom;
      g[j + 1] = -sn[j] * g[j];
      g[j] *= cs[j];

      ++res.iterations;
      rho = std::fabs(g[j + 1]);
      if (!std::isfinite(rho)) throw std::runtime_error("gmres: breakdown (non-finite residual)");
      res.residual_history.push_back(rho);

      if (rho <= tol || hnext == 0.0) {
        ++j;
        break;
      }
      if (j + 1 < m) {
        V.push_back(w);
        scale(1.0 / hnext, V[j + 1]);
      }
    }

    // back-substitute y and update x += Z y
    std::vector<double> y(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= H[(std::size_t)k * (m + 1) + i] * y[k];
      y[i] = s / H[(std::size_t)i * (m + 1) + i];
    }
    for (int k = 0; k < j; ++k) axpy(y[k], Z[k], x);

    rho = true_residual();
    res.residual_history.back() = rho; // replace estimate with the true norm
    if (rho <= tol) break;
  }

  res.converged = rho <= tol;
  return res;
}

} // namespace ocuflow
