#include "ocuflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ocuflow {

namespace {

// --------------------------------------------------------------------------
// Gauss rules for the Jacobi weight (1-t)^alpha on [-1, 1] via Golub-Welsch:
// eigenvalues of the symmetric tridiagonal recurrence matrix give the nodes,
// squared first eigenvector components give the weights.
// --------------------------------------------------------------------------
void gauss_jacobi(int n, double alpha, std::vector<double>& x, std::vector<double>& w) {
  // diagonal, subdiagonal in e[1..n-1]; e[n] is a scratch slot the QL sweep
  // may touch when an entire trailing block rotates
  std::vector<double> d(n), e(n + 1, 0.0);
  const double a = alpha, b = 0.0;
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    d[k] = (a == 0.0 && k == 0) ? 0.0 : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    e[k] = std::sqrt(num / den);
  }
  // total weight = 2^(a+b+1) B(a+1, b+1)
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);

  // QL with implicit shifts on the tridiagonal, tracking first components.
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  auto hypot2 = [](double p, double q) { return std::sqrt(p * p + q * q); };
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m + 1]) <= 1e-15 * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw std::runtime_error("gauss_jacobi: eigen iteration stalled");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l + 1]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l + 1] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i + 1];
          const double bb = c * e[i + 1];
          r = hypot2(f, g);
          e[i + 2] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m + 1] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * bb;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - bb;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (r == 0.0 && i >= l) continue; // early break: retry this l
        d[l] -= p;
        e[l + 1] = g;
        e[m + 1] = 0.0;
      }
    } while (m != l);
  }

  // sort ascending, emit
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d[order[j]] < d[order[i]]) std::swap(order[i], order[j]);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = d[order[i]];
    w[i] = mu0 * z[order[i]] * z[order[i]];
  }
}

// Nodes/weights on [0,1] for the weight (1-v)^alpha dv.
void jacobi_01(int n, double alpha, std::vector<double>& v, std::vector<double>& w) {
  gauss_jacobi(n, alpha, v, w);
  const double scale = std::pow(2.0, alpha + 1.0);
  for (int i = 0; i < n; ++i) {
    v[i] = 0.5 * (1.0 + v[i]);
    w[i] /= scale;
  }
}

void push_point2(QuadratureRule& r, double x, double y, double w) {
  r.points.push_back(x);
  r.points.push_back(y);
  r.weights.push_back(w);
}

// permutations of barycentric (a, a, c) scaled by the triangle area 1/2
void push_orbit3(QuadratureRule& r, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  push_point2(r, a, a, 0.5 * w);
  push_point2(r, c, a, 0.5 * w);
  push_point2(r, a, c, 0.5 * w);
}

// all six permutations of barycentric (a, b, c)
void push_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  const double gw = 0.5 * w;
  push_point2(r, b, c, gw);
  push_point2(r, c, b, gw);
  push_point2(r, a, c, gw);
  push_point2(r, c, a, gw);
  push_point2(r, a, b, gw);
  push_point2(r, b, a, gw);
}

QuadratureRule triangle_rule(int degree) {
  QuadratureRule r;
  r.dim = 2;
  r.degree = degree;
  switch (degree) {
    case 1:
      push_point2(r, 1.0 / 3.0, 1.0 / 3.0, 0.5);
      break;
    case 2:
      push_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      // six-point symmetric rule of degree 4 (positive weights)
      r.degree = 4;
      push_orbit3(r, 0.445948490915965, 0.223381589678011);
      push_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5: {
      // seven-point rule: centroid + two orbits at (6 +- sqrt(15))/21
      const double s15 = std::sqrt(15.0);
      push_point2(r, 1.0 / 3.0, 1.0 / 3.0, 0.5 * 9.0 / 40.0);
      push_orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
      push_orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
      break;
    }
    case 6:
      // twelve-point symmetric rule of degree 6 (positive weights)
      push_orbit3(r, 0.063089014491502, 0.050844906370207);
      push_orbit3(r, 0.249286745170910, 0.116786275726379);
      push_orbit6(r, 0.310352451033785, 0.053145049844816, 0.082851075618374);
      break;
    default:
      throw std::runtime_error("quadrature_rule: triangle degree must be in [1, 6]");
  }
  return r;
}

QuadratureRule tet_rule(int degree) {
  if (degree < 1 || degree > 6)
    throw std::runtime_error("quadrature_rule: tetrahedron degree must be in [1, 6]");
  // conical product: Legendre x Jacobi(1) x Jacobi(2), exact to 2n-1
  const int n = (degree + 2) / 2;
  std::vector<double> xu, wu, xv, wv, xw, ww;
  jacobi_01(n, 0.0, xu, wu);
  jacobi_01(n, 1.0, xv, wv);
  jacobi_01(n, 2.0, xw, ww);

  QuadratureRule r;
  r.dim = 3;
  r.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double z = xw[k];
        const double y = xv[j] * (1.0 - z);
        const double x = xu[i] * (1.0 - xv[j]) * (1.0 - z);
        r.points.insert(r.points.end(), {x, y, z});
        r.weights.push_back(wu[i] * wv[j] * ww[k]);
      }
  return r;
}

} // namespace

QuadratureRule quadrature_rule(int dim, int degree) {
  if (dim == 2) return triangle_rule(degree);
  if (dim == 3) return tet_rule(degree);
  throw std::runtime_error("quadrature_rule: dimension must be 2 or 3");
}

void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights) {
  jacobi_01(n, 0.0, points, weights);
}

} // namespace ocuflow
