#include "qlab/common/execution.hpp"

#include <omp.h>

namespace qlab {

const char* to_string(Execution e) { return e == Execution::Serial ? "serial" : "parallel"; }

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace qlab
