#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace polarsphere {

// Adaptive 15-point Gauss-Kronrod on [a, b]. tol is relative to the L1 norm of
// the integrand over the interval; for the O(1) integrands used here that keeps
// the absolute error well under 1e-10.
inline constexpr double kQuadratureTolerance = 1e-13;
inline constexpr unsigned kQuadratureMaxDepth = 15;

template <class F>
double integrate(F&& f, double a, double b, double tol = kQuadratureTolerance) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, kQuadratureMaxDepth, tol);
}

/// Tanh-sinh on [a, b], for integrands with square-root behaviour at the ends.
template <class F>
double integrate_endpoint_singular(F f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, a, b, tol);
}

/// integral_0^upper sin^k(t) dt.
double sine_power_integral(int k, double upper);

}  // namespace polarsphere
