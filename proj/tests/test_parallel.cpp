#include <cmath>
#include <cstring>

#include "doctest.h"
#include "polarsphere/experiments.hpp"
#include "polarsphere/parallel.hpp"
#include "polarsphere/set_spec.hpp"

using namespace polarsphere;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("accumulate_rows: OpenMP kernel matches the serial reference bit for bit") {
  const Dimension d(2);
  const Cap hemi = *parse_set_spec("hemi", d, 0.2).as_cap();
  auto kernel = [&](std::size_t t, std::span<double> out) { cap_chain_kernel(hemi, d, 42, t, out); };
  const auto serial = accumulate_rows(1000, 51, serial_config(), kernel);
  for (int threads : {1, 2, 3, 8}) {
    const auto par = accumulate_rows(1000, 51, ParallelConfig{Exec::kOpenMP, threads}, kernel);
    REQUIRE(par.trials == serial.trials);
    for (std::size_t r = 0; r < 51; ++r) {
      REQUIRE(bit_equal(par.sum[r], serial.sum[r]));
      REQUIRE(bit_equal(par.sum_sq[r], serial.sum_sq[r]));
    }
  }
}

TEST_CASE("collect_trials keeps trial order under any thread count") {
  auto body = [](std::size_t t) {
    Rng rng(5, 0, t);
    return rng.uniform();
  };
  const auto serial = collect_trials(777, serial_config(), body);
  const auto par = collect_trials(777, ParallelConfig{Exec::kOpenMP, 4}, body);
  CHECK(serial == par);
}

TEST_CASE("RowMoments std_error") {
  RowMoments m;
  m.sum = {4.0};
  m.sum_sq = {4.0};
  m.trials = 4;
  CHECK(m.mean(0) == 1.0);
  CHECK(m.std_error(0) == 0.0);
}

TEST_CASE("experiments are reproducible across thread counts") {
  const Dimension d(3);
  const auto a = parse_set_spec("hemi", d, 0.2);
  ConvergenceOptions serial_opts;
  serial_opts.parallel = serial_config();
  ConvergenceOptions par_opts;
  par_opts.parallel = ParallelConfig{Exec::kOpenMP, 3};
  const auto t1 = convergence_experiment(a, d, 30, 600, 9, serial_opts);
  const auto t2 = convergence_experiment(a, d, 30, 600, 9, par_opts);
  for (std::size_t i = 0; i < t1.rows.size(); ++i) {
    REQUIRE(bit_equal(t1.rows[i].estimate.mean, t2.rows[i].estimate.mean));
    REQUIRE(bit_equal(t1.rows[i].estimate.std_error, t2.rows[i].estimate.std_error));
  }
  const auto g1 = gamma_limit_check(Dimension(2), 0.2, 100, 500, 3, serial_config());
  const auto g2 = gamma_limit_check(Dimension(2), 0.2, 100, 500, 3, ParallelConfig{Exec::kOpenMP, 2});
  CHECK(bit_equal(g1.ks.statistic, g2.ks.statistic));
}
