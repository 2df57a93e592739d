#include "ocuflow/basis.hpp"

#include <stdexcept>

namespace ocuflow {

namespace {
constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
}

int basis_size(int dim, int degree) {
  if (degree != 1 && degree != 2) throw std::runtime_error("basis: degree must be 1 or 2");
  if (dim == 2) return degree == 1 ? 3 : 6;
  if (dim == 3) return degree == 1 ? 4 : 10;
  throw std::runtime_error("basis: dimension must be 2 or 3");
}

void reference_basis_eval(int dim, int degree, const double* p, double* N, double* G) {
  basis_size(dim, degree); // argument validation
  if (dim == 2) {
    const double x = p[0], y = p[1];
    const double lam[3] = {1.0 - x - y, x, y};
    const double dlam[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    if (degree == 1) {
      for (int i = 0; i < 3; ++i) {
        N[i] = lam[i];
        G[2 * i] = dlam[i][0];
        G[2 * i + 1] = dlam[i][1];
      }
      return;
    }
    for (int i = 0; i < 3; ++i) {
      N[i] = lam[i] * (2.0 * lam[i] - 1.0);
      G[2 * i] = (4.0 * lam[i] - 1.0) * dlam[i][0];
      G[2 * i + 1] = (4.0 * lam[i] - 1.0) * dlam[i][1];
    }
    for (int e = 0; e < 3; ++e) {
      const int a = (e + 1) % 3, b = (e + 2) % 3;
      N[3 + e] = 4.0 * lam[a] * lam[b];
      for (int c = 0; c < 2; ++c)
        G[2 * (3 + e) + c] = 4.0 * (dlam[a][c] * lam[b] + lam[a] * dlam[b][c]);
    }
    return;
  }

  const double x = p[0], y = p[1], z = p[2];
  const double lam[4] = {1.0 - x - y - z, x, y, z};
  const double dlam[4][3] = {{-1, -1, -1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  if (degree == 1) {
    for (int i = 0; i < 4; ++i) {
      N[i] = lam[i];
      for (int c = 0; c < 3; ++c) G[3 * i + c] = dlam[i][c];
    }
    return;
  }
  for (int i = 0; i < 4; ++i) {
    N[i] = lam[i] * (2.0 * lam[i] - 1.0);
    for (int c = 0; c < 3; ++c) G[3 * i + c] = (4.0 * lam[i] - 1.0) * dlam[i][c];
  }
  for (int e = 0; e < 6; ++e) {
    const int a = kTetEdges[e][0], b = kTetEdges[e][1];
    N[4 + e] = 4.0 * lam[a] * lam[b];
    for (int c = 0; c < 3; ++c)
      G[3 * (4 + e) + c] = 4.0 * (dlam[a][c] * lam[b] + lam[a] * dlam[b][c]);
  }
}

void reference_basis_nodes(int dim, int degree, double* nodes) {
  basis_size(dim, degree);
  if (dim == 2) {
    const double v[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (int i = 0; i < 3; ++i) {
      nodes[2 * i] = v[i][0];
      nodes[2 * i + 1] = v[i][1];
    }
    if (degree == 2) {
      for (int e = 0; e < 3; ++e) {
        const int a = (e + 1) % 3, b = (e + 2) % 3;
        nodes[2 * (3 + e)] = 0.5 * (v[a][0] + v[b][0]);
        nodes[2 * (3 + e) + 1] = 0.5 * (v[a][1] + v[b][1]);
      }
    }
    return;
  }
  const double v[4][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) nodes[3 * i + c] = v[i][c];
  if (degree == 2) {
    for (int e = 0; e < 6; ++e) {
      const int a = kTetEdges[e][0], b = kTetEdges[e][1];
      for (int c = 0; c < 3; ++c) nodes[3 * (4 + e) + c] = 0.5 * (v[a][c] + v[b][c]);
    }
  }
}

} // namespace ocuflow
