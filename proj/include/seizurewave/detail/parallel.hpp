#pragma once

#include <cstddef>
#include <functional>

namespace seizurewave::detail {

/// Worker count: min(hardware_concurrency, SEIZUREWAVE_THREADS) with a floor
/// of 1. Read once per process.
std::size_t thread_budget();

/// Runs fn(i) for i in [0, count). Work is distributed over thread_budget()
/// threads; callers must write results into per-index slots so that output
/// does not depend on scheduling. Exceptions from workers are rethrown (the
/// first one by index order wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace seizurewave::detail
