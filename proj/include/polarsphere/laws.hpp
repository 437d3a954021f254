#pragma once

#include <cstddef>
#include <vector>

#include "polarsphere/rng.hpp"
#include "polarsphere/sphere.hpp"

namespace polarsphere {

/// Law of delta(tau_U(x), O) for a point at distance xi from the pole.
/// Continuous on [0, xi) plus an atom of mass 1 - xi/pi at xi (the point is
/// left in place).
class TauLaw {
 public:
  TauLaw(Dimension d, double xi);

  Dimension dimension() const { return d_; }
  double xi() const { return xi_; }

  /// P(delta > beta).
  double tail(double beta) const;
  /// P(delta >= xi) = lim tail(beta) as beta -> xi from below.
  double atom() const;
  /// Right-continuous CDF and its left limit, for KS against samples.
  double cdf(double beta) const { return 1.0 - tail(beta); }
  double cdf_left(double beta) const;

  /// (1/pi) integral_0^beta ((cos t - cos beta)/(cos t - cos xi))^{(d-1)/2} dt.
  double integral_term(double beta) const;

 private:
  Dimension d_;
  double xi_;
};

/// Upper bound (beta/pi) ((1 - cos beta)/(1 - cos xi))^{(d-1)/2} on the
/// integral term. Requires 0 <= beta <= xi <= pi.
double tau_integral_bound(Dimension d, double xi, double beta);

/// Exact draw from TauLaw: the atom with probability atom(), otherwise the
/// continuous part inverted by bisection.
double sample_tau_distance(const TauLaw& law, Rng& rng);

/// d-th order statistic of n + d uniforms on [0, ell], started from
/// Y~_0 = y0 (the d-th lowest of the first d points).
struct OrderStatLaw {
  OrderStatLaw(Dimension d, double ell, double y0, std::size_t n);

  Dimension d;
  double ell;
  double y0;
  std::size_t n;
};

/// log P(B(n, p) = k), stable for large n.
double binomial_log_pmf(std::size_t n, std::size_t k, double p);
double binomial_pmf(std::size_t n, std::size_t k, double p);

/// P(Y~_n > eta | Y~_0 = y0) = I_{y0 > eta} sum_{j+k<d} P(B(d-1, eta/y0) = j) P(B(n, eta/ell) = k).
double orderstat_exact_tail(const OrderStatLaw& law, double eta);
/// Same tail with Y~_0 left random: P(fewer than d of n + d uniforms lie below eta).
double orderstat_marginal_tail(Dimension d, double ell, std::size_t n, double eta);

/// d-th smallest of n + d fresh uniforms on [0, ell]. Ignores y0.
double sample_orderstat_direct(const OrderStatLaw& law, Rng& rng);

/// Markov chain realizing the recursion with equality:
/// P(Y' > eta | Y = y) = I_{y > eta} (1 - (eta/ell)(eta/y)^{d-1}).
/// Returns (Y~_0 = y0, ..., Y~_n).
std::vector<double> sample_orderstat_chain(const OrderStatLaw& law, Rng& rng);
/// One step of that chain.
double orderstat_chain_step(Dimension d, double ell, double y, Rng& rng);

/// Gamma(shape d, rate 1): arrival time of the d-th point of a unit Poisson process.
struct GammaLaw {
  explicit GammaLaw(int shape);
  int shape;

  double tail(double s) const;
  double cdf(double s) const { return 1.0 - tail(s); }
  double mean() const { return shape; }
};

double gamma_tail(const GammaLaw& law, double s);

}  // namespace polarsphere
