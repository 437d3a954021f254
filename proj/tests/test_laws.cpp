#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarsphere/dynamics.hpp"
#include "polarsphere/error.hpp"
#include "polarsphere/laws.hpp"
#include "polarsphere/stats.hpp"

using namespace polarsphere;
using std::numbers::pi;

namespace {

// Tail-law integral term by tanh-sinh on the raw integrand.
double integral_term_oracle(int d, double xi, double beta) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double t) {
    const double r = (std::cos(t) - std::cos(beta)) / (std::cos(t) - std::cos(xi));
    return r <= 0 ? 0.0 : std::pow(r, 0.5 * (d - 1));
  };
  return ts.integrate(f, 0.0, beta) / pi;
}

// d-th smallest of: d-1 uniforms on [0, y], the point y, and n uniforms on [0, ell].
double orderstat_conditional_bruteforce(int d, double ell, double y, std::size_t n, Rng& rng) {
  std::vector<double> v;
  for (int i = 0; i < d - 1; ++i) v.push_back(y * rng.uniform());
  v.push_back(y);
  for (std::size_t i = 0; i < n; ++i) v.push_back(ell * rng.uniform());
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(d - 1)];
}

}  // namespace

TEST_CASE("tau_tail: closed form for d = 1 and boundary values") {
  const TauLaw law1(Dimension(1), pi / 2);
  CHECK(law1.tail(pi / 4) == doctest::Approx(0.75).epsilon(1e-14));
  for (int d = 1; d <= 5; ++d) {
    const TauLaw law(Dimension(d), 1.3);
    CHECK(law.tail(0.0) == 1.0);
    CHECK(law.tail(1.3) == 0.0);
    CHECK(law.tail(2.0) == 0.0);
    CHECK(law.atom() == doctest::Approx(1 - 1.3 / pi));
  }
  CHECK_THROWS_AS(TauLaw(Dimension(2), 0.0), UsageError);
  CHECK_THROWS_AS(TauLaw(Dimension(2), 1.0).tail(-0.1), UsageError);
}

TEST_CASE("tau_tail quadrature agrees with a tanh-sinh oracle") {
  for (int d : {2, 3, 4, 7}) {
    for (double xi : {0.3, 1.0, 2.0, 3.0, pi}) {
      const TauLaw law(Dimension(d), xi);
      for (double frac : {0.05, 0.3, 0.7, 0.95, 0.999}) {
        const double beta = frac * xi;
        INFO("d=" << d << " xi=" << xi << " beta=" << beta);
        CHECK(std::abs(law.integral_term(beta) - integral_term_oracle(d, xi, beta)) < 1e-10);
      }
    }
  }
}

TEST_CASE("tau_tail at d = 3, xi = 2, beta = 1 matches compression geometry") {
  const Dimension d(3);
  const TauLaw law(d, 2.0);
  const auto start = point_from_angles(d, std::vector<double>{2.0});
  std::size_t above = 0;
  constexpr std::size_t kN = 100000;
  for (std::size_t t = 0; t < kN; ++t) {
    Rng rng(31, 0, t);
    double out[2];
    compression_distances(start, rng, out);
    if (out[1] > 1.0) ++above;
  }
  const double emp = double(above) / kN;
  const double q = law.tail(1.0);
  CHECK(std::abs(emp - q) < 4 * std::sqrt(q * (1 - q) / kN));
}

TEST_CASE("property: tails are monotone and the integral bound holds") {
  for (int d : {1, 2, 3, 5}) {
    for (double xi : {0.2, 0.9, 2.0, 3.1}) {
      const TauLaw law(Dimension(d), xi);
      double prev = 1.0;
      for (int i = 0; i < 100; ++i) {
        const double beta = std::min(pi, pi * i / 99.0);
        const double t = law.tail(beta);
        REQUIRE(t <= prev + 1e-13);
        REQUIRE(t >= 0.0);
        prev = t;
        if (beta <= xi) {
          const double bound = tau_integral_bound(Dimension(d), xi, beta);
          REQUIRE(law.integral_term(beta) <= bound + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("small-angle jump law for d = 2 is E(t) - (1 - t^2) K(t), not t^2") {
  // Near the pole, P(delta' <= t xi | moved) tends to
  // int_0^t sqrt((t^2 - s^2)/(1 - s^2)) ds, a complete elliptic expression.
  const double xi = 1e-3;
  const TauLaw law(Dimension(2), xi);
  for (double t : {0.1, 0.5, 0.9}) {
    const double g = law.integral_term(t * xi) / (xi / pi);
    const double k = boost::math::ellint_1(t);
    const double e = boost::math::ellint_2(t);
    CHECK(g == doctest::Approx(e - (1 - t * t) * k).epsilon(1e-5));
  }
  CHECK(law.integral_term(0.1 * xi) / (xi / pi) == doctest::Approx(pi / 4 * 0.01).epsilon(0.01));
}

TEST_CASE("tau_integral_bound") {
  CHECK(tau_integral_bound(Dimension(1), 2.0, 1.2) == doctest::Approx(1.2 / pi));
  CHECK(TauLaw(Dimension(1), 2.0).integral_term(1.2) == doctest::Approx(1.2 / pi));
  CHECK(tau_integral_bound(Dimension(4), 2.0, 0.0) == 0.0);
  const TauLaw law(Dimension(3), 1.5);
  for (double beta : {0.3, 0.6, 0.9}) {
    const double gap = tau_integral_bound(Dimension(3), 1.5, beta) - law.integral_term(beta);
    CHECK(gap > 0.0);
  }
  CHECK_THROWS_AS(tau_integral_bound(Dimension(2), 1.0, 1.5), UsageError);
}

TEST_CASE("sample_tau_distance: atom, support, agreement with the tail") {
  const TauLaw law1(Dimension(1), pi / 2);
  CHECK(law1.atom() == doctest::Approx(0.5));
  std::size_t at_atom = 0;
  Rng rng(1, 0);
  constexpr std::size_t kN = 100000;
  for (std::size_t i = 0; i < kN; ++i) {
    const double v = sample_tau_distance(law1, rng);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= pi / 2);
    if (v == pi / 2) ++at_atom;
  }
  CHECK(std::abs(double(at_atom) / kN - 0.5) < 4 * std::sqrt(0.25 / kN));

  const TauLaw law2(Dimension(2), 1.0);
  std::vector<double> draws;
  for (std::size_t i = 0; i < kN; ++i) draws.push_back(sample_tau_distance(law2, rng));
  CHECK(*std::max_element(draws.begin(), draws.end()) <= 1.0);
  const ReferenceCdf ref{[&](double b) { return b >= 1.0 ? 1.0 : law2.cdf(std::max(b, 0.0)); },
                         [&](double b) { return law2.cdf_left(std::max(b, 0.0)); }, "tau"};
  CHECK(ks_statistic(draws, ref).statistic < 0.01);
}

TEST_CASE("binomial pmf: log-space agrees with exact small-n path and sums to one") {
  for (std::size_t n : {1u, 5u, 30u}) {
    for (double p : {0.0, 0.1, 0.5, 0.93, 1.0}) {
      double total = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        const double exact = binomial_pmf(n, k, p);
        total += exact;
        if (exact > 1e-300) CHECK(std::exp(binomial_log_pmf(n, k, p)) == doctest::Approx(exact));
      }
      CHECK(total == doctest::Approx(1.0));
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k <= 10000; ++k) total += binomial_pmf(10000, k, 0.003);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(binomial_pmf(10, 1, 1.5), DomainError);
}

TEST_CASE("orderstat_exact_tail: closed forms and domain") {
  for (std::size_t n : {0u, 3u, 40u}) {
    const OrderStatLaw law(Dimension(1), pi, 2.0, n);
    for (double eta : {0.1, 0.8, 1.9}) {
      CHECK(orderstat_exact_tail(law, eta) ==
            doctest::Approx(std::pow(1 - eta / pi, double(n))));
    }
    CHECK(orderstat_exact_tail(law, 2.5) == 0.0);
    CHECK(orderstat_exact_tail(OrderStatLaw(Dimension(3), pi, 1.0, n), 0.0) == 1.0);
  }
  CHECK_THROWS_AS(orderstat_exact_tail(OrderStatLaw(Dimension(2), 1.0, 1.0, 3), -0.1),
                  DomainError);
  CHECK_THROWS_AS(OrderStatLaw(Dimension(2), 1.0, 1.5, 3), UsageError);
}

TEST_CASE("orderstat_exact_tail matches brute-force order statistics (d=2, ell=y=pi, n=10)") {
  const OrderStatLaw law(Dimension(2), pi, pi, 10);
  const double eta = 0.3;
  std::size_t above = 0;
  constexpr std::size_t kN = 100000;
  Rng rng(71, 0);
  for (std::size_t i = 0; i < kN; ++i) {
    if (orderstat_conditional_bruteforce(2, pi, pi, 10, rng) > eta) ++above;
  }
  const double q = orderstat_exact_tail(law, eta);
  CHECK(std::abs(double(above) / kN - q) < 4 * std::sqrt(q * (1 - q) / kN));
}

TEST_CASE("marginal tail equals the conditional tail integrated over Y~_0") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int d : {1, 2, 3}) {
    for (std::size_t n : {0u, 5u, 20u}) {
      const double ell = 2.5;
      for (double eta : {0.1, 0.7, 1.8}) {
        // Y~_0 = max of d uniforms on [0, ell]: density d y^{d-1} / ell^d.
        const double integrated = ts.integrate(
            [&](double y) {
              if (y <= 0) return 0.0;
              return orderstat_exact_tail(OrderStatLaw(Dimension(d), ell, y, n), eta) * d *
                     std::pow(y, d - 1) / std::pow(ell, d);
            },
            eta, ell);
        CHECK(orderstat_marginal_tail(Dimension(d), ell, n, eta) ==
              doctest::Approx(integrated).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("sample_orderstat_direct") {
  Rng rng(4, 0);
  const OrderStatLaw law(Dimension(1), 2.0, 2.0, 0);
  std::vector<double> v;
  for (int i = 0; i < 20000; ++i) v.push_back(sample_orderstat_direct(law, rng));
  CHECK(*std::min_element(v.begin(), v.end()) >= 0.0);
  CHECK(*std::max_element(v.begin(), v.end()) <= 2.0);
  const auto ref =
      continuous_from_tail([](double x) { return std::clamp(1 - x / 2.0, 0.0, 1.0); }, "U");
  CHECK(ks_statistic(v, ref).statistic < 0.02);
}

TEST_CASE("sample_orderstat_chain: stay probability, monotonicity, marginal") {
  const Dimension d(2);
  Rng rng(5, 0);
  const double ell = pi;
  const double y = 1.2;
  std::size_t stays = 0;
  constexpr std::size_t kN = 100000;
  for (std::size_t i = 0; i < kN; ++i) {
    if (orderstat_chain_step(d, ell, y, rng) == y) ++stays;
  }
  const double p = 1 - y / ell;
  CHECK(std::abs(double(stays) / kN - p) < 4 * std::sqrt(p * (1 - p) / kN));

  const OrderStatLaw law(d, pi, 2.0, 20);
  std::vector<double> finals;
  for (std::size_t i = 0; i < kN; ++i) {
    const auto path = sample_orderstat_chain(law, rng);
    REQUIRE(path.size() == 21);
    REQUIRE(path.front() == 2.0);
    for (std::size_t k = 1; k < path.size(); ++k) REQUIRE(path[k] <= path[k - 1]);
    finals.push_back(path.back());
  }
  const auto ref = continuous_from_tail(
      [&](double eta) { return orderstat_exact_tail(law, std::max(eta, 0.0)); }, "exact");
  CHECK(ks_statistic(finals, ref).statistic < 0.02);
}

TEST_CASE("gamma tail") {
  CHECK(gamma_tail(GammaLaw(1), 0.7) == doctest::Approx(std::exp(-0.7)));
  CHECK(gamma_tail(GammaLaw(3), 0.0) == 1.0);
  CHECK(gamma_tail(GammaLaw(2), 1.0) == doctest::Approx(0.73576).epsilon(1e-5));
  CHECK(gamma_tail(GammaLaw(2), 1.0) == doctest::Approx(2 * std::exp(-1.0)));
  CHECK(GammaLaw(4).mean() == 4);
  CHECK_THROWS_AS(GammaLaw(0), UsageError);
}

TEST_CASE("order-statistic chain: Gamma limit and scaled mean") {
  const double ell = pi;
  for (int dd : {1, 2, 3}) {
    const Dimension d(dd);
    const OrderStatLaw law(d, ell, ell, 500);
    const GammaLaw gamma(dd);
    std::vector<double> scaled;
    double sum = 0.0;
    constexpr std::size_t kN = 100000;
    for (std::size_t t = 0; t < kN; ++t) {
      Rng rng(600, static_cast<std::uint64_t>(dd), t);
      double y = ell;
      for (std::size_t k = 0; k < law.n; ++k) y = orderstat_chain_step(d, ell, y, rng);
      sum += 500 * y;
      if (t < 10000) scaled.push_back(500 * y);
    }
    const auto ref = continuous_from_tail([&](double s) { return gamma.tail(s / ell); }, "gamma");
    INFO("d=" << dd);
    CHECK(ks_statistic(scaled, ref).statistic < 0.05);
    CHECK(std::abs(sum / kN - ell * dd) / (ell * dd) < 0.05);
  }
}
