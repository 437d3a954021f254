#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polarsphere/rng.hpp"
#include "polarsphere/set_model.hpp"
#include "polarsphere/sphere.hpp"

namespace polarsphere {

/// tau_u(x): whichever of x and sigma_u(x) is geodesically closer to the north
/// pole; ties keep x.
SpherePoint compress(const ReflectionAxis& u, const SpherePoint& x);
/// In-place kernel; scratch must have x.size() entries.
void compress_in_place(std::span<const double> u, std::span<double> x, std::span<double> scratch);

struct CompressionTrajectory {
  std::vector<SpherePoint> points;        // empty in lean mode
  std::vector<double> geodesic_distances;  // delta_k = delta(point_k, O)
  std::vector<double> chord_distances;     // Y_k = |point_k - O| = 2 sin(delta_k / 2)

  std::size_t steps() const { return geodesic_distances.size() - 1; }
};

enum class TrajectoryMode { kFull, kDistancesOnly };

/// x0 compressed by n fresh uniform axes drawn from rng.
CompressionTrajectory run_compression_chain(const SpherePoint& x0, std::size_t n, Rng& rng,
                                            TrajectoryMode mode = TrajectoryMode::kFull);

/// Lean kernel: writes delta_0..delta_n into out (size n + 1).
void compression_distances(const SpherePoint& x0, Rng& rng, std::span<double> out);

struct CapTrajectory {
  double radius;
  CompressionTrajectory centers;

  Cap cap(std::size_t k) const { return Cap(centers.points.at(k), radius); }
};

/// Polarizing a cap moves only its center, by the compression of the same axis.
CapTrajectory run_cap_chain(const Cap& cap0, std::size_t n, Rng& rng,
                            TrajectoryMode mode = TrajectoryMode::kFull);

/// m(cap_k sym-diff A*) for every step k.
std::vector<double> symm_diff_to_polar_cap(Dimension d, const CapTrajectory& traj);

/// Axes in the order run_compression_chain / run_cap_chain would draw them,
/// so the membership oracle can replay a chain.
std::vector<ReflectionAxis> draw_axes(Dimension d, std::size_t n, Rng& rng);

}  // namespace polarsphere
