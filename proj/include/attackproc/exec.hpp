#ifndef ATTACKPROC_EXEC_HPP
#define ATTACKPROC_EXEC_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace attackproc {

// Execution policy for the data-parallel kernels. The serial path is the
// reference implementation; the parallel path must produce byte-identical
// results, which every kernel achieves by writing into index-addressed slots
// and reducing in fixed order afterwards. tools/bench compares their runtimes.
enum class Exec { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel && n > 1) {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) {
    body(i);
  }
}

}  // namespace attackproc

#endif
