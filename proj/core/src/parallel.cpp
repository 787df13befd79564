#include "distlab/parallel.hpp"

#include <exception>
#include <mutex>
#include <omp.h>

namespace distlab {

namespace {
int g_threads = 0;
}

void set_threads(int n) {
  g_threads = n > 0 ? n : 0;
  if (g_threads > 0) omp_set_num_threads(g_threads);
}

int threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const long long count = static_cast<long long>(n);
  std::exception_ptr first;
  long long first_index = count;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      // keep the lowest failing index so the reported error is reproducible
      std::lock_guard<std::mutex> lock(mu);
      if (i < first_index) {
        first_index = i;
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace distlab
