// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

namespace dff {

/// Number of worker threads used by parallel_for. Defaults to the hardware
/// concurrency, overridable via set_thread_count or the DFF_THREADS
/// environment variable (checked once at startup).
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [begin, end). Iterations must write disjoint outputs;
/// the partition is static so results do not depend on scheduling or on the
/// configured thread count.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

/// Ordered reduction: partials[i] = fn(i) computed in parallel, then summed
/// sequentially in index order. Bit-identical for any thread count.
double parallel_sum(int begin, int end, const std::function<double(int)>& fn);

}  // namespace dff
