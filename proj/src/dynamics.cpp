#include "polarsphere/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "polarsphere/error.hpp"

namespace polarsphere {

void compress_in_place(std::span<const double> u, std::span<double> x,
                       std::span<double> scratch) {
  std::copy(x.begin(), x.end(), scratch.begin());
  reflect_in_place(u, scratch);
  // Strictly closer to O means strictly larger last coordinate.
  if (scratch.back() > x.back()) std::copy(scratch.begin(), scratch.end(), x.begin());
}

SpherePoint compress(const ReflectionAxis& u, const SpherePoint& x) {
  if (u.size() != x.size()) throw UsageError("dimension mismatch between axis and point");
  std::vector<double> v(x.coords().begin(), x.coords().end());
  std::vector<double> scratch(v.size());
  compress_in_place(u.coords(), v, scratch);
  return SpherePoint(std::move(v));
}

namespace {

double chord_to_pole(double geodesic) { return 2.0 * std::sin(0.5 * geodesic); }

}  // namespace

void compression_distances(const SpherePoint& x0, Rng& rng, std::span<double> out) {
  if (out.empty()) return;
  std::vector<double> x(x0.coords().begin(), x0.coords().end());
  std::vector<double> u(x.size());
  std::vector<double> scratch(x.size());
  out[0] = pole_distance(x);
  for (std::size_t k = 1; k < out.size(); ++k) {
    sample_unit_vector(u, rng);
    compress_in_place(u, x, scratch);
    out[k] = pole_distance(x);
  }
}

CompressionTrajectory run_compression_chain(const SpherePoint& x0, std::size_t n, Rng& rng,
                                            TrajectoryMode mode) {
  CompressionTrajectory t;
  t.geodesic_distances.reserve(n + 1);
  t.chord_distances.reserve(n + 1);
  const bool full = mode == TrajectoryMode::kFull;
  if (full) t.points.reserve(n + 1);

  std::vector<double> x(x0.coords().begin(), x0.coords().end());
  std::vector<double> u(x.size());
  std::vector<double> scratch(x.size());
  auto record = [&] {
    const double g = pole_distance(x);
    t.geodesic_distances.push_back(g);
    t.chord_distances.push_back(chord_to_pole(g));
    if (full) t.points.emplace_back(x);
  };
  record();
  for (std::size_t k = 0; k < n; ++k) {
    sample_unit_vector(u, rng);
    compress_in_place(u, x, scratch);
    record();
  }
  return t;
}

CapTrajectory run_cap_chain(const Cap& cap0, std::size_t n, Rng& rng, TrajectoryMode mode) {
  return CapTrajectory{cap0.radius, run_compression_chain(cap0.center, n, rng, mode)};
}

std::vector<double> symm_diff_to_polar_cap(Dimension d, const CapTrajectory& traj) {
  const auto& dist = traj.centers.geodesic_distances;
  if (dist.empty()) throw UsageError("empty cap trajectory");
  std::vector<double> out;
  out.reserve(dist.size());
  for (double s : dist) out.push_back(cap_symm_diff_measure(d, traj.radius, s));
  return out;
}

std::vector<ReflectionAxis> draw_axes(Dimension d, std::size_t n, Rng& rng) {
  std::vector<ReflectionAxis> axes;
  axes.reserve(n);
  std::vector<double> u(d.ambient());
  for (std::size_t k = 0; k < n; ++k) {
    sample_unit_vector(u, rng);
    axes.emplace_back(u);
  }
  return axes;
}

}  // namespace polarsphere
