#pragma once

#include <cstddef>
#include <functional>

namespace distlab {

// Worker cap for every parallel loop in the library (0 = runtime default).
// Results never depend on it: loops write per-index slots and all reductions
// run afterwards in index order.
void set_threads(int n);
int threads();

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace distlab
