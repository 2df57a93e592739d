#pragma once

#include <vector>

namespace ocuflow {

/// Quadrature rule on the reference simplex (triangle or tetrahedron).
/// Weights include the reference measure, so they sum to 1/2 (2D) or 1/6 (3D).
struct QuadratureRule {
  int dim = 2;
  int degree = 1; // every polynomial up to this total degree is integrated exactly
  std::vector<double> points;  // dim * n, reference coordinates
  std::vector<double> weights; // n, all positive

  int size() const { return (int)weights.size(); }
  const double* point(int q) const { return points.data() + (std::size_t)q * dim; }
};

/// Positive-weight rule exact to `degree` (1..6). Triangles use fixed
/// symmetric rules; tetrahedra use a conical (collapsed Gauss-Jacobi) product.
QuadratureRule quadrature_rule(int dim, int degree);

/// Gauss-Legendre points/weights on [0, 1], exact to degree 2n-1. Used for
/// facet (line) integrals.
void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights);

} // namespace ocuflow
