// Fan-out of independent tasks. Results are stored by index, so the parallel
// and serial paths produce identical output for pure tasks.
#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace aoi2d {

/// Worker count: explicit value if > 0, otherwise the OpenMP default.
inline int resolve_workers(int requested) {
  return requested > 0 ? requested : omp_get_max_threads();
}

/// Serial reference: out[i] = fn(i) in index order.
template <class Fn>
auto serial_map(std::size_t n, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
  return out;
}

/// out[i] = fn(i) on `workers` OpenMP threads with dynamic scheduling.
/// The first exception (lowest index) is rethrown after all tasks finish.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, int workers = 0)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(n);
  std::vector<std::exception_ptr> err(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(resolve_workers(workers))
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      err[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace aoi2d
