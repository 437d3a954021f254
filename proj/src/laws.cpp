#include "polarsphere/laws.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "polarsphere/error.hpp"
#include "polarsphere/quadrature.hpp"

namespace polarsphere {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// TauLaw

TauLaw::TauLaw(Dimension d, double xi) : d_(d), xi_(xi) {
  if (!(xi > 0.0 && xi <= pi)) throw UsageError("xi must lie in (0, pi]");
}

double TauLaw::integral_term(double beta) const {
  if (!(beta >= 0.0 && beta <= xi_)) throw UsageError("integral term needs 0 <= beta <= xi");
  if (beta == 0.0) return 0.0;
  if (d_.value() == 1) return beta / pi;
  if (beta == xi_) return beta / pi;
  const double expo = 0.5 * (d_.value() - 1);
  const double xi = xi_;
  // cos a - cos b = 2 sin((a+b)/2) sin((b-a)/2), evaluated without cancellation.
  auto ratio = [beta, xi](double t) {
    const double num = std::sin(0.5 * (beta + t)) * std::sin(0.5 * (beta - t));
    const double den = std::sin(0.5 * (xi + t)) * std::sin(0.5 * (xi - t));
    return num / den;
  };
  // t = beta (1 - s^2) grades the nodes toward t = beta, where the integrand
  // behaves like (beta - t)^{(d-1)/2}.
  auto f = [&](double s) {
    const double t = beta * (1.0 - s * s);
    const double r = ratio(t);
    return r <= 0.0 ? 0.0 : std::pow(r, expo) * 2.0 * beta * s;
  };
  return integrate_endpoint_singular(f, 0.0, 1.0) / pi;
}

double TauLaw::tail(double beta) const {
  if (!(beta >= 0.0 && beta <= pi)) throw UsageError("beta must lie in [0, pi]");
  if (beta >= xi_) return 0.0;
  return std::clamp(1.0 - integral_term(beta), 0.0, 1.0);
}

double TauLaw::atom() const { return 1.0 - xi_ / pi; }

double TauLaw::cdf_left(double beta) const {
  if (beta < xi_) return cdf(beta);
  if (beta == xi_) return 1.0 - atom();
  return 1.0;
}

double tau_integral_bound(Dimension d, double xi, double beta) {
  if (!(0.0 <= beta && beta <= xi && xi <= pi)) {
    throw UsageError("tau_integral_bound needs 0 <= beta <= xi <= pi");
  }
  if (beta == 0.0) return 0.0;
  // (1 - cos b)/(1 - cos x) = (sin(b/2)/sin(x/2))^2
  const double ratio = std::sin(0.5 * beta) / std::sin(0.5 * xi);
  return beta / pi * std::pow(ratio, d.value() - 1);
}

double sample_tau_distance(const TauLaw& law, Rng& rng) {
  const double v = rng.uniform();
  const double xi = law.xi();
  // cdf rises continuously from 0 to 1 - atom() on [0, xi), then jumps to 1.
  if (v >= 1.0 - law.atom()) return xi;
  if (law.dimension().value() == 1) return v * pi;
  auto g = [&](double b) { return law.cdf(b) - v; };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      g, 0.0, xi, -v, 1.0 - law.atom() - v,
      [](double a, double b) { return std::abs(b - a) <= 1e-10; }, max_iter);
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Order statistics

OrderStatLaw::OrderStatLaw(Dimension dim, double ell_, double y0_, std::size_t n_)
    : d(dim), ell(ell_), y0(y0_), n(n_) {
  if (!(ell > 0.0)) throw UsageError("interval length ell must be positive");
  if (!(y0 > 0.0 && y0 <= ell)) throw UsageError("y0 must lie in (0, ell]");
}

namespace {

double log_choose(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    s += std::log(static_cast<double>(n - i)) - std::log(static_cast<double>(i + 1));
  }
  return s;
}

}  // namespace

double binomial_log_pmf(std::size_t n, std::size_t k, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial probability outside [0, 1]");
  if (k > n) return -INFINITY;
  if (p == 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p == 1.0) return k == n ? 0.0 : -INFINITY;
  return log_choose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

double binomial_pmf(std::size_t n, std::size_t k, double p) {
  if (n <= 30) {
    // Small n: exact coefficient, plain powers.
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial probability outside [0, 1]");
    if (k > n) return 0.0;
    double c = 1.0;
    for (std::size_t i = 0; i < std::min(k, n - k); ++i) {
      c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    return c * std::pow(p, static_cast<double>(k)) * std::pow(1.0 - p, static_cast<double>(n - k));
  }
  return std::exp(binomial_log_pmf(n, k, p));
}

double orderstat_exact_tail(const OrderStatLaw& law, double eta) {
  if (!(eta >= 0.0)) throw DomainError("eta must be non-negative");
  if (eta >= law.y0) return 0.0;
  if (eta == 0.0) return 1.0;
  const double p_first = eta / law.y0;
  const double p_rest = eta / law.ell;
  if (p_first > 1.0 || p_rest > 1.0) throw DomainError("eta/y0 or eta/ell outside [0, 1]");
  const auto d = static_cast<std::size_t>(law.d.value());
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double pj = binomial_pmf(d - 1, j, p_first);
    if (pj == 0.0) continue;
    for (std::size_t k = 0; j + k < d; ++k) total += pj * binomial_pmf(law.n, k, p_rest);
  }
  return std::clamp(total, 0.0, 1.0);
}

double orderstat_marginal_tail(Dimension d, double ell, std::size_t n, double eta) {
  if (!(eta >= 0.0)) throw DomainError("eta must be non-negative");
  if (eta >= ell) return 0.0;
  const auto dd = static_cast<std::size_t>(d.value());
  double total = 0.0;
  for (std::size_t k = 0; k < dd; ++k) total += binomial_pmf(n + dd, k, eta / ell);
  return std::clamp(total, 0.0, 1.0);
}

double sample_orderstat_direct(const OrderStatLaw& law, Rng& rng) {
  const auto d = static_cast<std::size_t>(law.d.value());
  std::vector<double> v(law.n + d);
  for (double& x : v) x = rng.uniform();
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d - 1), v.end());
  return law.ell * v[d - 1];
}

double orderstat_chain_step(Dimension d, double ell, double y, Rng& rng) {
  const double v = ell * rng.uniform();
  if (v >= y) return y;
  // Below y the new d-th point is the max of d uniforms on [0, y].
  return y * std::pow(rng.uniform(), 1.0 / d.value());
}

std::vector<double> sample_orderstat_chain(const OrderStatLaw& law, Rng& rng) {
  std::vector<double> out;
  out.reserve(law.n + 1);
  double y = law.y0;
  out.push_back(y);
  for (std::size_t k = 0; k < law.n; ++k) {
    y = orderstat_chain_step(law.d, law.ell, y, rng);
    out.push_back(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gamma

GammaLaw::GammaLaw(int k) : shape(k) {
  if (k < 1) throw UsageError("Gamma shape must be a positive integer");
}

double GammaLaw::tail(double s) const {
  if (!(s >= 0.0)) throw UsageError("Gamma tail needs s >= 0");
  double term = std::exp(-s);
  double total = term;
  for (int k = 1; k < shape; ++k) {
    term *= s / k;
    total += term;
  }
  return std::min(total, 1.0);
}

double gamma_tail(const GammaLaw& law, double s) { return law.tail(s); }

}  // namespace polarsphere
