#include "polarsphere/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polarsphere/dynamics.hpp"
#include "polarsphere/laws.hpp"

namespace polarsphere {

using std::numbers::pi;

namespace {

// Substream 0 is reserved for per-run draws (A*); trials use trial + 1.
std::uint64_t trial_substream(std::size_t t) { return static_cast<std::uint64_t>(t) + 1; }

ConvergenceTable table_from_moments(const RowMoments& m, std::size_t trials, std::uint64_t seed) {
  ConvergenceTable table;
  table.trials = trials;
  table.seed = seed;
  for (std::size_t n = 0; n < m.sum.size(); ++n) {
    ConvergenceRow row;
    row.n = n;
    row.estimate.mean = m.mean(n);
    row.estimate.std_error = m.std_error(n);
    row.estimate.n_samples = trials;
    row.estimate.seed = seed;
    row.scaled = static_cast<double>(n) * row.estimate.mean;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace

void cap_chain_kernel(const Cap& cap, Dimension d, std::uint64_t seed, std::size_t trial,
                      std::span<double> out) {
  Rng rng(seed, streams::kCompression, trial_substream(trial));
  compression_distances(cap.center, rng, out);
  // The center moves rarely once it is close to the pole; reuse the last value.
  double last_s = -1.0;
  double last_v = 0.0;
  for (double& v : out) {
    if (v != last_s) {
      last_s = v;
      last_v = cap_symm_diff_measure(d, cap.radius, v);
    }
    v = last_v;
  }
}

ConvergenceTable convergence_experiment(const SetExpr& a, Dimension d, std::size_t n_max,
                                        std::size_t trials, std::uint64_t seed,
                                        const ConvergenceOptions& options) {
  if (trials == 0) throw UsageError("convergence experiment needs at least one trial");
  const std::size_t rows = n_max + 1;

  if (auto cap = a.as_cap()) {
    if (cap->center.size() != d.ambient()) throw UsageError("set dimension does not match d");
    auto moments = accumulate_rows(trials, rows, options.parallel,
                                   [&](std::size_t t, std::span<double> out) {
                                     cap_chain_kernel(*cap, d, seed, t, out);
                                   });
    auto table = table_from_moments(moments, trials, seed);
    table.d = d.value();
    table.set = a.describe();
    table.exact_cap_tracking = true;
    return table;
  }

  if (n_max > options.depth_limit) {
    throw DepthLimitError("general sets are limited to n <= " +
                          std::to_string(options.depth_limit) + " polarizations, got " +
                          std::to_string(n_max));
  }
  Rng polar_rng(seed, streams::kMeasure, 0);
  const Cap target = polar_cap(a, d, options.polar_budget, polar_rng).cap;
  const SetExpr target_set = SetExpr::cap(target);

  auto moments = accumulate_rows(
      trials, rows, options.parallel, [&](std::size_t t, std::span<double> out) {
        Rng axis_rng(seed, streams::kAxes, trial_substream(t));
        Rng measure_rng(seed, streams::kMeasure, trial_substream(t));
        const auto axes = draw_axes(d, n_max, axis_rng);
        PolarizedSet set{a, {}, options.depth_limit};
        for (std::size_t n = 0; n < rows; ++n) {
          if (n > 0) set.history.push_back(axes[n - 1]);
          out[n] = mc_symm_diff(set, target_set, d, options.mc_samples, measure_rng).mean;
        }
      });
  auto table = table_from_moments(moments, trials, seed);
  table.d = d.value();
  table.set = a.describe();
  return table;
}

bool CheckReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

CheckReport upper_bound_check(const ConvergenceTable& table, Dimension d, double sigmas) {
  if (table.rows.empty()) throw UsageError("upper_bound_check: empty table");
  const double cd = std::ldexp(1.0, d.value());
  CheckReport report{"upper_bound", {}};

  Verdict bound{"mean_n <= 2^d/n + k sigma", true, 0.0, cd, ""};
  std::ostringstream failures;
  double worst = -INFINITY;
  for (const auto& row : table.rows) {
    if (row.n == 0) continue;
    const auto n = static_cast<double>(row.n);
    // n mean - k sigma n compared against 2^d
    const double lhs = n * (row.estimate.mean - sigmas * row.estimate.std_error);
    worst = std::max(worst, lhs);
    if (row.estimate.mean > cd / n + sigmas * row.estimate.std_error) {
      bound.passed = false;
      failures << " row " << row.n;
    }
  }
  bound.value = std::isfinite(worst) ? worst : 0.0;
  bound.detail = bound.passed ? (std::isfinite(worst) ? "all rows within bound" : "no rows with n >= 1")
                              : "failing rows:" + failures.str();
  report.verdicts.push_back(bound);

  // Reciprocal recursion on z = 2^{-d} mean. Delta method for the spread of 1/z.
  Verdict rec{"1/z_n >= 1/z_m + (n - m)", true, INFINITY, 0.0, ""};
  std::ostringstream rec_fail;
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& prev = table.rows[i - 1];
    const auto& cur = table.rows[i];
    if (prev.estimate.mean <= 0.0 || cur.estimate.mean <= 0.0 || cur.n <= prev.n) continue;
    const double inv_prev = cd / prev.estimate.mean;
    const double inv_cur = cd / cur.estimate.mean;
    const double se_prev = cd * prev.estimate.std_error / (prev.estimate.mean * prev.estimate.mean);
    const double se_cur = cd * cur.estimate.std_error / (cur.estimate.mean * cur.estimate.mean);
    const double slack = sigmas * std::hypot(se_prev, se_cur);
    const double margin = inv_cur - inv_prev - static_cast<double>(cur.n - prev.n) + slack;
    rec.value = std::min(rec.value, margin);
    ++pairs;
    if (margin < 0.0) {
      rec.passed = false;
      rec_fail << " row " << cur.n;
    }
  }
  if (pairs == 0) rec.value = 0.0;
  rec.detail = rec.passed ? std::to_string(pairs) + " consecutive pairs checked"
                          : "failing rows:" + rec_fail.str();
  report.verdicts.push_back(rec);
  return report;
}

PowerLawFit fit_power_law(const ConvergenceTable& table, std::size_t burn_in) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : table.rows) {
    if (row.n < burn_in || row.n == 0 || !(row.estimate.mean > 0.0)) continue;
    xs.push_back(std::log(static_cast<double>(row.n)));
    ys.push_back(std::log(row.estimate.mean));
  }
  if (xs.size() < 5) {
    throw FitNotApplicable("power-law fit needs >= 5 rows past burn-in with positive means, got " +
                           std::to_string(xs.size()));
  }
  const auto k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw FitNotApplicable("power-law fit needs at least two distinct n");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  PowerLawFit fit;
  fit.C = std::exp(intercept);
  fit.p = -slope;
  fit.residual = std::sqrt(ss / k);
  fit.rows_used = xs.size();
  fit.decaying = fit.p > 0.1;
  return fit;
}

// ---------------------------------------------------------------------------

std::vector<double> final_pole_distances(Dimension d, double alpha, std::size_t n,
                                         std::size_t trials, std::uint64_t seed,
                                         const ParallelConfig& parallel) {
  const double a[] = {alpha};
  const SpherePoint start = point_from_angles(d, a);
  return collect_trials(trials, parallel, [&](std::size_t t) {
    Rng rng(seed, streams::kCompression, trial_substream(t));
    std::vector<double> dist(n + 1);
    compression_distances(start, rng, dist);
    return dist.back();
  });
}

LimitReport hemisphere_limit_check(Dimension d, double alpha, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, const ParallelConfig& parallel,
                                   double tolerance) {
  if (!(alpha > 0.0 && alpha <= pi)) throw UsageError("alpha must lie in (0, pi]");
  if (n == 0 || trials == 0) throw UsageError("hemisphere limit needs n >= 1 and trials >= 1");
  auto dist = final_pole_distances(d, alpha, n, trials, seed, parallel);
  // Two hemispheres differ by (center distance) / pi.
  for (double& x : dist) x *= static_cast<double>(n) / pi;
  const auto s = mean_ci(dist);
  LimitReport r;
  r.d = d.value();
  r.alpha = alpha;
  r.n = n;
  r.trials = trials;
  r.scaled_mean = s.mean;
  r.scaled_std_error = s.std_error;
  r.target = d.value();
  r.relative_deviation = (s.mean - r.target) / r.target;
  r.tolerance = tolerance;
  r.passed = std::abs(r.relative_deviation) < tolerance;
  return r;
}

GammaLimitReport gamma_limit_check(Dimension d, double alpha, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, const ParallelConfig& parallel,
                                   double threshold) {
  if (!(alpha > 0.0 && alpha <= pi)) throw UsageError("alpha must lie in (0, pi]");
  if (n == 0 || trials == 0) throw UsageError("gamma limit needs n >= 1 and trials >= 1");
  auto dist = final_pole_distances(d, alpha, n, trials, seed, parallel);
  for (double& x : dist) x *= static_cast<double>(n);
  const GammaLaw gamma(d.value());
  const auto ref = continuous_from_tail([gamma](double s) { return gamma.tail(s / pi); },
                                        "pi*Gamma(" + std::to_string(d.value()) + ")");
  GammaLimitReport r;
  r.d = d.value();
  r.alpha = alpha;
  r.n = n;
  r.trials = trials;
  r.ks = ks_statistic(std::move(dist), ref);
  r.threshold = threshold;
  r.passed = r.ks.statistic < threshold;
  return r;
}

KSReport tau_law_geometry_ks(Dimension d, double xi, std::size_t trials, std::uint64_t seed,
                           const ParallelConfig& parallel) {
  const double a[] = {xi};
  const SpherePoint start = point_from_angles(d, a);
  auto draws = collect_trials(trials, parallel, [&](std::size_t t) {
    Rng rng(seed, streams::kCompression, trial_substream(t));
    double out[2];
    compression_distances(start, rng, out);
    return out[1];
  });
  // The starting point's own distance is xi up to rounding; use it for the atom.
  const TauLaw law(d, pole_distance(start));
  ReferenceCdf ref{[law](double b) { return b >= law.xi() ? 1.0 : law.cdf(std::max(b, 0.0)); },
                   [law](double b) { return law.cdf_left(std::max(b, 0.0)); },
                   "tau_tail(d=" + std::to_string(d.value()) + ")"};
  return ks_statistic(std::move(draws), ref);
}

bool TrinityReport::passed(double threshold) const {
  return ks_direct_exact < threshold && ks_chain_exact < threshold && ks_direct_chain < threshold;
}

TrinityReport orderstat_trinity(Dimension d, std::size_t n, double ell, std::size_t trials,
                                std::uint64_t seed, const ParallelConfig& parallel) {
  const OrderStatLaw law(d, ell, ell, n);
  auto direct = collect_trials(trials, parallel, [&](std::size_t t) {
    Rng rng(seed, streams::kOrderDirect, trial_substream(t));
    return sample_orderstat_direct(law, rng);
  });
  auto chain = collect_trials(trials, parallel, [&](std::size_t t) {
    Rng rng(seed, streams::kOrderChain, trial_substream(t));
    // Y~_0 is the largest of d uniforms on [0, ell].
    const double y0 = ell * std::pow(rng.uniform(), 1.0 / d.value());
    double y = y0;
    for (std::size_t k = 0; k < n; ++k) y = orderstat_chain_step(d, ell, y, rng);
    return y;
  });
  const auto ref = continuous_from_tail(
      [d, ell, n](double eta) { return orderstat_marginal_tail(d, ell, n, std::max(eta, 0.0)); },
      "orderstat_exact");
  TrinityReport r;
  r.d = d.value();
  r.n = n;
  r.trials = trials;
  r.ell = ell;
  r.ks_direct_chain = ks_two_sample(direct, chain);
  r.ks_direct_exact = ks_statistic(std::move(direct), ref).statistic;
  r.ks_chain_exact = ks_statistic(std::move(chain), ref).statistic;
  return r;
}

DominationReport domination_check(Dimension d, double xi, double ell, std::size_t n,
                                  std::size_t trials, std::uint64_t seed,
                                  const ParallelConfig& parallel, std::size_t grid,
                                  double sigmas) {
  if (!(xi > 0.0 && xi <= pi)) throw UsageError("xi must lie in (0, pi]");
  if (!(ell <= pi)) throw UsageError("ell must not exceed pi");
  if (grid < 2 || trials == 0) throw UsageError("domination check needs grid >= 2, trials >= 1");
  DominationReport r;
  r.d = d.value();
  r.xi = xi;
  r.ell = ell;
  // Chord of the start as built, so an unmoved trial sits exactly at y0.
  const double a[] = {xi};
  r.y0 = 2.0 * std::sin(0.5 * pole_distance(point_from_angles(d, a)));
  r.n = n;
  r.trials = trials;
  r.sigmas = sigmas;
  if (!(ell >= r.y0)) throw UsageError("ell must be at least the initial chord distance");

  auto chords = final_pole_distances(d, xi, n, trials, seed, parallel);
  for (double& g : chords) g = 2.0 * std::sin(0.5 * g);
  std::sort(chords.begin(), chords.end());
  const auto total = static_cast<double>(trials);
  auto geometric_tail = [&](double eta) {
    const auto above = chords.end() - std::upper_bound(chords.begin(), chords.end(), eta);
    return static_cast<double>(above) / total;
  };

  std::vector<double> etas(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    etas[i] = r.y0 * static_cast<double>(i) / static_cast<double>(grid - 1);
  }
  // Binomial sigma under whichever of the two tails is larger, so a reference
  // tail of 1e-5 is not judged against an empirical count of zero.
  auto holds = [&](double eta, double ref_ell, DominationRow* row) {
    const double g = geometric_tail(eta);
    const double q = orderstat_exact_tail(OrderStatLaw(d, ref_ell, r.y0, n), eta);
    const double sigma = std::sqrt(std::max(g * (1.0 - g), q * (1.0 - q)) / total);
    const bool ok = g >= q - sigmas * sigma;
    if (row) *row = DominationRow{eta, g, sigma, q, ok};
    return ok;
  };
  for (double eta : etas) {
    DominationRow row;
    holds(eta, ell, &row);
    r.rows.push_back(row);
    r.passed = r.passed && row.passed;
  }
  auto all_hold = [&](double ref_ell) {
    return std::all_of(etas.begin(), etas.end(),
                       [&](double eta) { return holds(eta, ref_ell, nullptr); });
  };
  // The reference tail grows with ell, so domination is monotone in ell.
  if (all_hold(pi)) {
    r.ell_max_empirical = pi;
  } else if (!all_hold(r.y0)) {
    r.ell_max_empirical = 0.0;
  } else {
    double lo = r.y0;
    double hi = pi;
    for (int it = 0; it < 50; ++it) {
      const double mid = 0.5 * (lo + hi);
      (all_hold(mid) ? lo : hi) = mid;
    }
    r.ell_max_empirical = lo;
  }
  return r;
}

IdentityEntry identity_check_axis(const SetExpr& a, const SetExpr& b, const ReflectionAxis& u,
                                  Dimension d, std::size_t samples, Rng& rng, double sigmas) {
  if (samples == 0) throw UsageError("identity check needs samples >= 1");
  const PolarizedSet sa{a, {u}};
  const PolarizedSet sb{b, {u}};
  std::vector<double> lhs(samples);
  std::vector<double> rhs(samples);
  std::vector<double> diff(samples);
  std::vector<double> x(d.ambient());
  std::vector<double> xr(d.ambient());
  for (std::size_t i = 0; i < samples; ++i) {
    sample_unit_vector(x, rng);
    const bool in_a = a.contains(x);
    const bool in_b = b.contains(x);
    const double after = (membership(sa, x) && membership(sb, x)) ? 1.0 : 0.0;
    const double before = (in_a && in_b) ? 1.0 : 0.0;
    double right = 0.0;
    if (in_a && !in_b) {
      std::copy(x.begin(), x.end(), xr.begin());
      reflect_in_place(u.coords(), xr);
      if (b.contains(xr) && !a.contains(xr)) right = 1.0;
    }
    lhs[i] = after - before;
    rhs[i] = right;
    diff[i] = lhs[i] - rhs[i];
  }
  IdentityEntry e;
  e.axis.assign(u.coords().begin(), u.coords().end());
  e.lhs = mean_ci(lhs);
  e.rhs = mean_ci(rhs);
  e.diff = mean_ci(diff);
  e.agree = std::abs(e.diff.mean) <= sigmas * e.diff.std_error;
  e.lhs_nonnegative = e.lhs.mean >= -sigmas * e.lhs.std_error;
  e.rhs_nonnegative = e.rhs.mean >= -sigmas * e.rhs.std_error;
  return e;
}

bool IdentityReport::passed() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const IdentityEntry& e) { return e.passed(); });
}

IdentityReport identity_check(const SetExpr& a, const SetExpr& b, Dimension d,
                              std::size_t trials_axes, std::size_t samples, std::uint64_t seed,
                              const ParallelConfig& parallel, double sigmas) {
  IdentityReport report;
  report.sigmas = sigmas;
  report.entries.resize(trials_axes);
  for_each_trial(trials_axes, parallel, [&](std::size_t t) {
    Rng axis_rng(seed, streams::kAxes, trial_substream(t));
    Rng rng(seed, streams::kIdentity, trial_substream(t));
    const auto u = sample_uniform_axis(d, axis_rng);
    report.entries[t] = identity_check_axis(a, b, u, d, samples, rng, sigmas);
  });
  return report;
}

}  // namespace polarsphere
