#include "polarsphere/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "polarsphere/error.hpp"
#include "polarsphere/quadrature.hpp"

namespace polarsphere {

namespace {

void normalize(std::vector<double>& v) {
  double norm2 = 0.0;
  for (double c : v) norm2 += c * c;
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw UsageError("cannot normalize a zero or non-finite vector");
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : v) c *= inv;
}

void require_same(std::size_t a, std::size_t b) {
  if (a != b) {
    throw UsageError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b) +
                     " coordinates");
  }
}

}  // namespace

Dimension::Dimension(int d) : d_(d) {
  if (d < 1) throw UsageError("sphere dimension must be >= 1, got " + std::to_string(d));
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw UsageError("a sphere point needs at least 2 coordinates");
  normalize(coords_);
}

SpherePoint SpherePoint::operator-() const {
  std::vector<double> v(coords_);
  for (double& c : v) c = -c;
  return SpherePoint(std::move(v));
}

ReflectionAxis::ReflectionAxis(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw UsageError("a reflection axis needs at least 2 coordinates");
  normalize(coords_);
  const auto first = std::find_if(coords_.begin(), coords_.end(), [](double c) { return c != 0.0; });
  if (first != coords_.end() && *first < 0.0) {
    for (double& c : coords_) c = -c;
  }
}

ReflectionAxis::ReflectionAxis(const SpherePoint& p)
    : ReflectionAxis(std::vector<double>(p.coords().begin(), p.coords().end())) {}

SpherePoint north_pole(Dimension d) {
  std::vector<double> v(d.ambient(), 0.0);
  v.back() = 1.0;
  return SpherePoint(std::move(v));
}

double dot(std::span<const double> x, std::span<const double> y) {
  require_same(x.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  require_same(x.size(), y.size());
  // 2 atan2(|x - y|, |x + y|) stays accurate where acos of the dot product does not.
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    minus += (x[i] - y[i]) * (x[i] - y[i]);
    plus += (x[i] + y[i]) * (x[i] + y[i]);
  }
  return 2.0 * std::atan2(std::sqrt(minus), std::sqrt(plus));
}

double chord_distance(const SpherePoint& x, const SpherePoint& y) {
  require_same(x.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double pole_distance(std::span<const double> x) {
  double side = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) side += x[i] * x[i];
  return std::atan2(std::sqrt(side), x.back());
}

double pole_distance(const SpherePoint& x) { return pole_distance(x.coords()); }

void reflect_in_place(std::span<const double> u, std::span<double> x) {
  const double twice = 2.0 * dot(u, x);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= twice * u[i];
}

SpherePoint reflect(const ReflectionAxis& u, const SpherePoint& x) {
  require_same(u.size(), x.size());
  std::vector<double> v(x.coords().begin(), x.coords().end());
  reflect_in_place(u.coords(), v);
  return SpherePoint(std::move(v));
}

void sample_unit_vector(std::span<double> out, Rng& rng) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : out) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : out) c *= inv;
}

SpherePoint sample_uniform_point(Dimension d, Rng& rng) {
  std::vector<double> v(d.ambient());
  sample_unit_vector(v, rng);
  return SpherePoint(std::move(v));
}

ReflectionAxis sample_uniform_axis(Dimension d, Rng& rng) {
  std::vector<double> v(d.ambient());
  sample_unit_vector(v, rng);
  return ReflectionAxis(std::move(v));
}

double reflected_point_density(Dimension d, const SpherePoint& x, const SpherePoint& z) {
  require_same(x.size(), z.size());
  if (d.value() == 1) return 1.0;
  const double chord = chord_distance(x, z);
  if (chord == 0.0) {
    throw SingularInputError("reflected-point density is unbounded at z == x");
  }
  return std::pow(chord, -(d.value() - 1));
}

double reflected_distance_density(Dimension d, double delta) {
  if (delta < 0.0 || delta > std::numbers::pi) return 0.0;
  // Normalizer: integral of sin^{d-1} over [0, pi] equals that of cos^{d-1}(t/2).
  const double norm = sine_power_integral(d.value() - 1, std::numbers::pi);
  return std::pow(std::cos(0.5 * delta), d.value() - 1) / norm;
}

SpherePoint point_from_angles(Dimension d, std::span<const double> angles) {
  const auto n = static_cast<std::size_t>(d.value());
  if (angles.size() > n) {
    throw UsageError("got " + std::to_string(angles.size()) + " angles for a " +
                     std::to_string(n) + "-sphere");
  }
  std::vector<double> theta(n, 0.0);
  std::copy(angles.begin(), angles.end(), theta.begin());
  std::vector<double> x(n + 1);
  // x_{d+1} = cos t1, x_d = sin t1 cos t2, ..., x_2 = (prod sin) cos t_d, x_1 = (prod sin) sin t_d.
  double s = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    x[n - k] = s * std::cos(theta[k]);
    s *= std::sin(theta[k]);
  }
  x[0] = s;
  return SpherePoint(std::move(x));
}

}  // namespace polarsphere
