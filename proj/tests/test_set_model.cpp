#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarsphere/dynamics.hpp"
#include "polarsphere/error.hpp"
#include "polarsphere/set_model.hpp"

using namespace polarsphere;
using std::numbers::pi;

namespace {

// Normalized cap volume from the regularized incomplete beta function.
double cap_measure_ibeta(int d, double r) {
  const double half = 0.5 * boost::math::ibeta(0.5 * d, 0.5, std::pow(std::sin(r), 2));
  return r <= pi / 2 ? half : 1.0 - half;
}

SetExpr cap_at(Dimension d, std::vector<double> angles, double r) {
  return SetExpr::cap(Cap(point_from_angles(d, angles), r));
}

}  // namespace

TEST_CASE("cap_measure") {
  for (int d = 1; d <= 6; ++d) {
    CHECK(cap_measure(Dimension(d), pi / 2) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(cap_measure(Dimension(d), 0.0) == 0.0);
    CHECK(cap_measure(Dimension(d), pi) == 1.0);
  }
  for (double r : {0.1, 0.7, 1.3, 2.0, 3.0}) {
    CHECK(cap_measure(Dimension(1), r) == doctest::Approx(r / pi).epsilon(1e-13));
    CHECK(cap_measure(Dimension(2), r) == doctest::Approx((1 - std::cos(r)) / 2).epsilon(1e-13));
    for (int d : {3, 4, 5, 8}) {
      CHECK(std::abs(cap_measure(Dimension(d), r) - cap_measure_ibeta(d, r)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(cap_measure(Dimension(2), -0.1), UsageError);
  CHECK_THROWS_AS(cap_measure(Dimension(2), 4.0), UsageError);
}

TEST_CASE("cap_radius_from_measure") {
  CHECK(cap_radius_from_measure(Dimension(3), 0.5) == doctest::Approx(pi / 2).epsilon(1e-13));
  CHECK(cap_radius_from_measure(Dimension(2), 0.25) == doctest::Approx(pi / 3).epsilon(1e-12));
  for (int d : {1, 2, 3, 5}) {
    double prev = -1.0;
    for (double v = 0.0; v <= 1.0; v += 0.05) {
      const double r = cap_radius_from_measure(Dimension(d), v);
      CHECK(r >= prev);
      prev = r;
      CHECK(std::abs(cap_measure(Dimension(d), r) - v) < 1e-10);
    }
  }
  CHECK_THROWS_AS(cap_radius_from_measure(Dimension(2), 1.5), UsageError);
}

TEST_CASE("cap_symm_diff_measure: hemisphere and trivial cases") {
  for (int d = 1; d <= 4; ++d) {
    for (double s : {0.0, 0.3, 1.7, pi}) {
      CHECK(cap_symm_diff_measure(Dimension(d), pi / 2, s) == doctest::Approx(s / pi));
    }
    CHECK(cap_symm_diff_measure(Dimension(d), 0.8, 0.0) == 0.0);
  }
}

TEST_CASE("cap_symm_diff_measure matches Monte Carlo") {
  struct Case {
    int d;
    double r;
    double s;
  };
  // The first case is the d=2, r=pi/3, s=pi/4 example; 10^6 samples.
  for (const Case c : {Case{2, pi / 3, pi / 4}, Case{1, 0.7, 1.0}, Case{1, 2.0, 2.5},
                       Case{3, 0.9, 0.5}, Case{3, 2.2, 1.4}, Case{2, 0.4, 2.9}}) {
    const Dimension d(c.d);
    const Cap a(north_pole(d), c.r);
    const Cap b(point_from_angles(d, std::vector<double>{c.s}), c.r);
    Rng rng(1234, static_cast<std::uint64_t>(c.d * 100 + c.r * 10));
    const auto est = mc_measure(
        [&](std::span<const double> x) { return a.contains(x) != b.contains(x); }, d, 1000000,
        rng);
    const double exact = cap_symm_diff_measure(d, c.r, c.s);
    INFO("d=" << c.d << " r=" << c.r << " s=" << c.s << " exact=" << exact
              << " mc=" << est.mean);
    CHECK(std::abs(est.mean - exact) < 4 * est.std_error + 1e-12);
  }
}

TEST_CASE("cap_symm_diff_measure is monotone in center distance") {
  for (int d : {1, 2, 3}) {
    for (double r : {0.3, 1.0, 2.5}) {
      double prev = 0.0;
      for (double s = 0.0; s <= pi; s += pi / 60) {
        const double v = cap_symm_diff_measure(Dimension(d), r, s);
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }
}

TEST_CASE("mc_measure") {
  const Dimension d(2);
  const auto all = mc_measure([](std::span<const double>) { return true; }, d, 1000, 1);
  CHECK(all.mean == 1.0);
  CHECK(all.std_error == 0.0);
  CHECK(all.seed == 1);

  const Cap hemi = hemisphere(point_from_angles(d, std::vector<double>{0.9, 0.2}));
  const auto h = mc_measure([&](std::span<const double> x) { return hemi.contains(x); }, d,
                            100000, 2);
  CHECK(std::abs(h.mean - 0.5) < 4 * h.std_error);

  const Cap cap(point_from_angles(d, std::vector<double>{2.0}), pi / 3);
  const auto c = mc_measure([&](std::span<const double> x) { return cap.contains(x); }, d,
                            100000, 3);
  CHECK(std::abs(c.mean - cap_measure(d, pi / 3)) < 4 * c.std_error);
  CHECK(c.std_error == doctest::Approx(std::sqrt(c.mean * (1 - c.mean) / 100000)));
  CHECK_THROWS_AS(mc_measure([](std::span<const double>) { return true; }, d, 0, 1),
                  UsageError);
}

TEST_CASE("membership: polarization rule cases") {
  const Dimension d(2);
  const auto base = SetExpr::unite(
      {cap_at(d, {1.2, 0.3}, 0.5), cap_at(d, {2.4, 2.0}, 0.6), cap_at(d, {0.4, 4.0}, 0.2)});
  Rng rng(31, 0);
  std::size_t both_in = 0;
  std::size_t both_out = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto u = sample_uniform_axis(d, rng);
    const auto x = sample_uniform_point(d, rng);
    const PolarizedSet empty{base, {}};
    REQUIRE(membership(empty, x) == base.contains(x));
    const auto xr = reflect(u, x);
    const PolarizedSet one{base, {u}};
    const bool in_x = base.contains(x);
    const bool in_xr = base.contains(xr);
    if (in_x && in_xr) {
      ++both_in;
      REQUIRE(membership(one, x));
    }
    if (!in_x && !in_xr) {
      ++both_out;
      REQUIRE_FALSE(membership(one, x));
    }
    // Exactly one in: x keeps the point iff x is the one closer to the pole.
    if (in_x != in_xr) REQUIRE(membership(one, x) == (x.height() >= xr.height()));
  }
  CHECK(both_in > 0);
  CHECK(both_out > 0);
}

TEST_CASE("membership: depth limit") {
  const Dimension d(2);
  Rng rng(1, 0);
  PolarizedSet set{cap_at(d, {1.0}, 0.5), draw_axes(d, 25, rng)};
  CHECK_THROWS_AS(membership(set, north_pole(d)), DepthLimitError);
  set.depth_limit = 30;
  CHECK_NOTHROW(membership(set, north_pole(d)));
}

TEST_CASE("membership: long histories stay tractable with memoization") {
  const Dimension d(2);
  Rng rng(8, 0);
  const auto base = SetExpr::unite({cap_at(d, {2.0}, 0.9), cap_at(d, {1.0, 3.0}, 0.4)});
  const PolarizedSet set{base, draw_axes(d, 18, rng)};
  const auto est = mc_measure([&](std::span<const double> x) { return membership(set, x); }, d,
                              2000, rng);
  const auto ref = mc_measure([&](std::span<const double> x) { return base.contains(x); }, d,
                              20000, rng);
  CHECK(std::abs(est.mean - ref.mean) < 4 * std::hypot(est.std_error, ref.std_error));
}

TEST_CASE("cap consistency: oracle polarization equals tracked cap") {
  for (int dd : {1, 2, 3}) {
    const Dimension d(dd);
    Rng rng(500 + dd, 0);
    const std::vector<double> angles{2.1, 0.5};
    const Cap cap0(point_from_angles(d, std::span(angles).first(std::min<std::size_t>(dd, 2))),
                   0.8);
    Rng chain_rng(77, static_cast<std::uint64_t>(dd));
    const auto traj = run_cap_chain(cap0, 10, chain_rng);
    Rng axis_rng(77, static_cast<std::uint64_t>(dd));
    const auto axes = draw_axes(d, 10, axis_rng);
    for (std::size_t k : {std::size_t{1}, std::size_t{4}, std::size_t{10}}) {
      const PolarizedSet oracle{SetExpr::cap(cap0),
                                std::vector<ReflectionAxis>(axes.begin(), axes.begin() + k)};
      const auto tracked = SetExpr::cap(traj.cap(k));
      const auto est = mc_symm_diff(oracle, tracked, d, 20000, rng);
      INFO("d=" << dd << " k=" << k);
      CHECK(est.mean <= 1e-4);
    }
  }
}

TEST_CASE("measure preservation, contraction toward A*, idempotence on A*") {
  const Dimension d(2);
  const auto a = SetExpr::unite({cap_at(d, {1.6, 0.0}, 0.6), cap_at(d, {2.6, 2.5}, 0.5),
                                 SetExpr::complement(cap_at(d, {0.0}, 2.8))});
  Rng rng(404, 0);
  const auto star = polar_cap(a, d, 200000, rng).cap;
  const auto star_set = SetExpr::cap(star);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = sample_uniform_axis(d, rng);
    const PolarizedSet su{a, {u}};
    const auto after = mc_measure([&](std::span<const double> x) { return membership(su, x); },
                                  d, 100000, rng);
    const auto before = mc_measure([&](std::span<const double> x) { return a.contains(x); }, d,
                                   100000, rng);
    CHECK(std::abs(after.mean - before.mean) <
          4 * std::hypot(after.std_error, before.std_error));

    Rng r1(900, static_cast<std::uint64_t>(trial));
    Rng r2(900, static_cast<std::uint64_t>(trial));
    const auto moved = mc_symm_diff(su, star_set, d, 100000, r1);
    const auto orig = mc_symm_diff(PolarizedSet{a, {}}, star_set, d, 100000, r2);
    CHECK(moved.mean <= orig.mean + 4 * std::hypot(moved.std_error, orig.std_error));

    const PolarizedSet s_star{star_set, {u}};
    const auto disc = mc_symm_diff(s_star, star_set, d, 100000, rng);
    CHECK(disc.mean == 0.0);
  }
}

TEST_CASE("polar_cap") {
  const Dimension d(3);
  Rng rng(6, 0);
  const auto pc = polar_cap(cap_at(d, {1.0, 0.2, 0.3}, 0.9), d, 0, rng);
  CHECK(pc.cap.radius == 0.9);
  CHECK(pole_distance(pc.cap.center) == 0.0);
  CHECK(polar_cap(SetExpr::cap(hemisphere(point_from_angles(d, std::vector<double>{2.0}))), d, 0,
                  rng)
            .cap.radius == doctest::Approx(pi / 2));

  // Two disjoint small caps: A* has the summed measure.
  const Dimension d2(2);
  const auto two = SetExpr::unite({cap_at(d2, {0.5}, 0.3), cap_at(d2, {2.5}, 0.4)});
  const auto est = polar_cap(two, d2, 400000, rng);
  const double exact = cap_measure(d2, 0.3) + cap_measure(d2, 0.4);
  CHECK(std::abs(est.measure.mean - exact) < 4 * est.measure.std_error);
  CHECK(cap_measure(d2, est.cap.radius) == doctest::Approx(est.measure.mean).epsilon(1e-10));
  CHECK_THROWS_AS(polar_cap(two, d2, 0, rng), UsageError);
}

TEST_CASE("SetExpr composition and predicates") {
  const Dimension d(2);
  const auto o = north_pole(d);
  const auto small = cap_at(d, {0.0}, 0.3);
  CHECK(small.contains(o));
  CHECK_FALSE(SetExpr::complement(small).contains(o));
  CHECK(SetExpr::intersect({small, SetExpr::cap(hemisphere(o))}).contains(o));
  const auto upper = SetExpr::predicate([](std::span<const double> x) { return x.back() > 0.0; });
  CHECK(upper.contains(o));
  CHECK_FALSE(upper.as_cap().has_value());
  CHECK(small.as_cap().has_value());
  CHECK_THROWS_AS(SetExpr::unite({}), UsageError);
}
