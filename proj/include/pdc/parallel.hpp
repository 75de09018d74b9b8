#pragma once

#include <cstddef>
#include <functional>

namespace pdc {

/// Worker count: PDC_THREADS if set and positive, otherwise the hardware concurrency.
std::size_t thread_count();

/// Calls body(i) for i in [0, n). Each index runs exactly once; results must be
/// written to per-index slots so output order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace pdc
