#pragma once

#include <cstddef>
#include <functional>

namespace ocuflow {

/// Process-wide worker count used by the fork/join helpers. 1 = serial.
void set_thread_count(int n);
int thread_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n). All results that feed
/// back into shared state must be written to disjoint slots: the helper never
/// performs reductions, so output bits cannot depend on the schedule.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace ocuflow
