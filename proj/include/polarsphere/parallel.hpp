#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#ifdef POLARSPHERE_OPENMP
#include <omp.h>
#endif

namespace polarsphere {

enum class Exec { kSerial, kOpenMP };

struct ParallelConfig {
  Exec exec = Exec::kOpenMP;
  int threads = 0;  // 0 = OpenMP default
};

inline ParallelConfig serial_config() { return ParallelConfig{Exec::kSerial, 1}; }

/// Trials are grouped into fixed-size chunks; each chunk is reduced serially and
/// chunks are combined in index order, so sums do not depend on thread count.
inline constexpr std::size_t kTrialChunk = 256;

namespace detail {

template <class F>
void run_indexed(std::size_t count, const ParallelConfig& cfg, F&& body) {
#ifdef POLARSPHERE_OPENMP
  if (cfg.exec == Exec::kOpenMP) {
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace detail

/// body(trial) for every trial; body must only write trial-owned state.
template <class F>
void for_each_trial(std::size_t trials, const ParallelConfig& cfg, F&& body) {
  detail::run_indexed(trials, cfg, body);
}

/// One scalar per trial, stored in trial order.
template <class F>
std::vector<double> collect_trials(std::size_t trials, const ParallelConfig& cfg, F&& body) {
  std::vector<double> out(trials);
  for_each_trial(trials, cfg, [&](std::size_t t) { out[t] = body(t); });
  return out;
}

/// Per-row first and second moments across trials.
struct RowMoments {
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::size_t trials = 0;

  double mean(std::size_t row) const { return sum[row] / static_cast<double>(trials); }
  double std_error(std::size_t row) const;
};

/// kernel(trial, row_values) fills rows values for one trial; moments are
/// accumulated per row.
template <class Kernel>
RowMoments accumulate_rows(std::size_t trials, std::size_t rows, const ParallelConfig& cfg,
                           Kernel&& kernel) {
  const std::size_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<RowMoments> partial(chunks);
  detail::run_indexed(chunks, cfg, [&](std::size_t c) {
    RowMoments& p = partial[c];
    p.sum.assign(rows, 0.0);
    p.sum_sq.assign(rows, 0.0);
    std::vector<double> values(rows);
    const std::size_t end = std::min(trials, (c + 1) * kTrialChunk);
    for (std::size_t t = c * kTrialChunk; t < end; ++t) {
      kernel(t, std::span<double>(values));
      for (std::size_t r = 0; r < rows; ++r) {
        p.sum[r] += values[r];
        p.sum_sq[r] += values[r] * values[r];
      }
    }
    p.trials = end - c * kTrialChunk;
  });
  RowMoments total;
  total.sum.assign(rows, 0.0);
  total.sum_sq.assign(rows, 0.0);
  for (const auto& p : partial) {
    for (std::size_t r = 0; r < rows; ++r) {
      total.sum[r] += p.sum[r];
      total.sum_sq[r] += p.sum_sq[r];
    }
    total.trials += p.trials;
  }
  return total;
}

}  // namespace polarsphere
