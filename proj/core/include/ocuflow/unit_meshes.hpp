#pragma once

#include "ocuflow/mesh.hpp"

namespace ocuflow {

/// Boundary tags assigned to the four sides of a generated rectangle.
struct SideTags {
  int left = boundary::GammaAmb;
  int right = boundary::GammaAmb;
  int bottom = boundary::GammaAmb;
  int top = boundary::GammaAmb;
};

/// Structured triangulation of [0,1]^2 with nx-by-ny quads split into
/// triangles; every cell belongs to the fluid region. `jitter` displaces the
/// interior vertices by a reproducible pseudo-random fraction of the local
/// spacing (0 = exact tensor grid), which breaks the mesh's symmetry without
/// touching the boundary.
Mesh unit_square_mesh(int nx, int ny, SideTags tags = {}, double jitter = 0.0);

} // namespace ocuflow
