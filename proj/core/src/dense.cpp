#include "ocuflow/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace ocuflow {

std::vector<double> dense_solve(std::span<const double> a, std::span<const double> b,
                                int max_size) {
  const int n = (int)b.size();
  if ((std::size_t)n * n != a.size()) throw std::runtime_error("dense_solve: shape mismatch");
  if (n > max_size) throw std::runtime_error("dense_solve: size exceeds cap");

  std::vector<double> lu(a.begin(), a.end());
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;

  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(lu[(std::size_t)k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(lu[(std::size_t)i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("dense_solve: singular matrix at column " + std::to_string(k));
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(lu[(std::size_t)k * n + j], lu[(std::size_t)p * n + j]);
      std::swap(piv[k], piv[p]);
    }
    const double d = lu[(std::size_t)k * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double m = lu[(std::size_t)i * n + k] / d;
      lu[(std::size_t)i * n + k] = m;
      for (int j = k + 1; j < n; ++j) lu[(std::size_t)i * n + j] -= m * lu[(std::size_t)k * n + j];
    }
  }

  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (int i = 1; i < n; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= lu[(std::size_t)i * n + j] * x[j];
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu[(std::size_t)i * n + j] * x[j];
    x[i] = s / lu[(std::size_t)i * n + i];
  }
  return x;
}

} // namespace ocuflow
