#ifndef NLSYS_PARALLEL_HPP
#define NLSYS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nlsys {

/// Worker count from NLSYS_THREADS (default 1).
int thread_count();

/// Runs body(i) for i in [0, n). Each index is handled by exactly one
/// worker; callers write results to per-index slots so the outcome does not
/// depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nlsys

#endif  // NLSYS_PARALLEL_HPP
