#pragma once

#include <span>
#include <vector>

namespace ocuflow {

/// Solves the dense system A x = b by LU factorization with partial pivoting.
/// `a` is row-major n-by-n and is left unchanged. Intended as a test oracle
/// and as a coarse-problem fallback; n is capped (default 2000) to keep it
/// out of the large-problem path by accident.
std::vector<double> dense_solve(std::span<const double> a, std::span<const double> b,
                                int max_size = 2000);

} // namespace ocuflow
