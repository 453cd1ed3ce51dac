#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace csop {

/// Every sweep kernel takes an Execution; `serial` is the reference path the
/// parallel path is tested against.
enum class Execution { serial, parallel };

/// Applies f(i) for i in [0, n). Results must be written to per-index slots,
/// so both paths produce identical output. The first exception thrown by any
/// iteration is rethrown after the loop.
template <class F>
void for_each_index(std::ptrdiff_t n, Execution exec, F&& f) {
  if (exec == Execution::serial) {
    for (std::ptrdiff_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Caps OpenMP parallelism from the CSOP_THREADS environment variable, if set.
void apply_thread_limit_from_env();

}  // namespace csop
