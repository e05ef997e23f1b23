#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace qlab {

// Every data-parallel kernel accepts a policy. Serial is the reference
// implementation used by tests to check the OpenMP path.
enum class Execution { Serial, Parallel };

const char* to_string(Execution e);

// Set the OpenMP thread count; n <= 0 leaves the runtime default.
void set_thread_count(int n);
int thread_count();

// Runs fn(i) for i in [0, n). Exceptions thrown inside the parallel region
// are captured and the first one is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Execution exec, Fn&& fn) {
  if (exec == Execution::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace qlab
