#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polarsphere/rng.hpp"

namespace polarsphere {

/// Sphere dimension d >= 1; points live in R^{d+1}.
class Dimension {
 public:
  explicit Dimension(int d);
  int value() const { return d_; }
  std::size_t ambient() const { return static_cast<std::size_t>(d_) + 1; }
  friend bool operator==(Dimension, Dimension) = default;

 private:
  int d_;
};

inline constexpr double kUnitTolerance = 1e-12;

/// Unit vector in R^{d+1}. Renormalized on construction.
class SpherePoint {
 public:
  explicit SpherePoint(std::vector<double> coords);

  Dimension dimension() const { return Dimension(static_cast<int>(coords_.size()) - 1); }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }
  // Last coordinate, i.e. cos of the geodesic distance to the north pole.
  double height() const { return coords_.back(); }

  SpherePoint operator-() const;

 private:
  std::vector<double> coords_;
};

/// Reflection parameter u in S^d / {+-1}, stored with its first nonzero
/// coordinate positive so u and -u have one representative.
class ReflectionAxis {
 public:
  explicit ReflectionAxis(std::vector<double> coords);
  explicit ReflectionAxis(const SpherePoint& p);

  Dimension dimension() const { return Dimension(static_cast<int>(coords_.size()) - 1); }
  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// O = (0, ..., 0, 1).
SpherePoint north_pole(Dimension d);

double dot(std::span<const double> x, std::span<const double> y);

/// Angle between x and y in [0, pi]; the dot product is clamped before acos.
double geodesic_distance(const SpherePoint& x, const SpherePoint& y);
/// |x - y| in R^{d+1}.
double chord_distance(const SpherePoint& x, const SpherePoint& y);
/// delta(x, O).
double pole_distance(const SpherePoint& x);
double pole_distance(std::span<const double> x);

/// sigma_u(x) = x - 2 (u.x) u.
SpherePoint reflect(const ReflectionAxis& u, const SpherePoint& x);
/// In-place variant for hot loops; no renormalization.
void reflect_in_place(std::span<const double> u, std::span<double> x);

/// Gaussian-normalize construction; writes a uniform unit vector into out.
void sample_unit_vector(std::span<double> out, Rng& rng);
SpherePoint sample_uniform_point(Dimension d, Rng& rng);
ReflectionAxis sample_uniform_axis(Dimension d, Rng& rng);

/// Density of sigma_U(x) at z with respect to the uniform probability measure:
/// |x - z|^{-(d-1)}. Throws SingularInputError at z == x for d >= 2.
double reflected_point_density(Dimension d, const SpherePoint& x, const SpherePoint& z);

/// Marginal density of delta(x, sigma_U(x)) on [0, pi]; proportional to
/// cos^{d-1}(delta / 2).
double reflected_distance_density(Dimension d, double delta);

/// Point from hyperspherical angles (theta_1, ..., theta_d); theta_1 is the
/// polar angle from the north pole. Missing trailing angles are zero.
SpherePoint point_from_angles(Dimension d, std::span<const double> angles);

}  // namespace polarsphere
