#pragma once

// Small Monte Carlo helpers: Wilson intervals, moments, and a deterministic
// parallel loop (each index writes its own slot, reductions run serially).

#include <cstddef>
#include <functional>
#include <span>

namespace sprd {

struct Proportion {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%. n = 0 yields [0, 1].
Proportion wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

struct Summary {
  double mean = 0.0;
  /// Unbiased sample variance (0 for fewer than two values).
  double variance = 0.0;
  double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> values);

/// Worker count from SPRD_THREADS, else the number of logical cores.
int default_threads();

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first
/// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace sprd
