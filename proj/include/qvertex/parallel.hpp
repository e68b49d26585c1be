#pragma once

#include <cstddef>
#include <functional>

namespace qvertex {

// Deterministic parallel map over an index range; callers merge per-index
// results in order.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

} // namespace qvertex
