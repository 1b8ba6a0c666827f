// Copyright (c) 2026 the dff authors
// SPDX-License-Identifier: Apache-2.0

#include "dff/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace dff {

namespace {

int default_threads() {
  if (const char* env = std::getenv("DFF_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

std::atomic<int> g_threads{0};

}  // namespace

int thread_count() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n == 0) {
    n = default_threads();
    g_threads.store(n, std::memory_order_relaxed);
  }
  return n;
}

void set_thread_count(int n) { g_threads.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
  const int n = end - begin;
  if (n <= 0) return;
  const int nt = std::min(thread_count(), n);
  if (nt <= 1 || n < 4) {
    for (int i = begin; i < end; ++i) fn(i);
    return;
  }
  // Dynamic assignment over a fixed index range; outputs are disjoint per
  // index, so the result is independent of which thread runs which index.
  std::atomic<int> next{begin};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= end) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int t = 0; t < nt - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

double parallel_sum(int begin, int end, const std::function<double(int)>& fn) {
  const int n = end - begin;
  if (n <= 0) return 0.0;
  std::vector<double> partials(n);
  parallel_for(begin, end, [&](int i) { partials[i - begin] = fn(i); });
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

}  // namespace dff
