#pragma once

namespace ocuflow {

/// Number of Lagrange basis functions on the reference simplex:
/// dim 2: 3 (P1) / 6 (P2);  dim 3: 4 (P1) / 10 (P2).
int basis_size(int dim, int degree);

/// Evaluates the degree-1 or degree-2 Lagrange basis at a reference point.
/// `values` gets basis_size entries; `gradients` gets basis_size * dim entries
/// (reference-coordinate gradients, interleaved per function). Node ordering:
/// vertices first, then edge midpoints. On the triangle, edge k joins vertices
/// (k+1)%3 and (k+2)%3 (opposite-vertex convention); on the tetrahedron edges
/// are (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
void reference_basis_eval(int dim, int degree, const double* point, double* values,
                          double* gradients);

/// Reference coordinates of the basis nodes, basis_size * dim entries.
void reference_basis_nodes(int dim, int degree, double* nodes);

} // namespace ocuflow
