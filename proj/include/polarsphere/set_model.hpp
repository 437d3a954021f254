#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarsphere/rng.hpp"
#include "polarsphere/sphere.hpp"

namespace polarsphere {

/// Closed spherical cap {x : delta(x, center) <= radius}.
struct Cap {
  Cap(SpherePoint center, double radius);

  SpherePoint center;
  double radius;

  bool contains(std::span<const double> x) const;
  bool contains(const SpherePoint& x) const { return contains(x.coords()); }
};

Cap hemisphere(SpherePoint center);

using PointPredicate = std::function<bool(std::span<const double>)>;

/// Finite expression tree over caps (union / intersection / complement), with
/// an escape hatch for caller-supplied membership predicates. Immutable and
/// cheap to copy.
class SetExpr {
 public:
  static SetExpr cap(Cap c);
  static SetExpr unite(std::vector<SetExpr> parts);
  static SetExpr intersect(std::vector<SetExpr> parts);
  static SetExpr complement(SetExpr inner);
  static SetExpr predicate(PointPredicate pred, std::string label = "predicate");

  bool contains(std::span<const double> x) const;
  bool contains(const SpherePoint& x) const { return contains(x.coords()); }

  /// Set when the expression is a single cap (enables exact cap tracking).
  std::optional<Cap> as_cap() const;
  std::string describe() const;

  struct Node;

 private:
  explicit SetExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline constexpr std::size_t kDefaultDepthLimit = 24;

/// S_{U_n} o ... o S_{U_1} applied to base.
struct PolarizedSet {
  SetExpr base;
  std::vector<ReflectionAxis> history;
  std::size_t depth_limit = kDefaultDepthLimit;
};

/// Recursive two-case polarization rule; ties take the "or" branch.
/// Throws DepthLimitError when history exceeds depth_limit.
bool membership(const PolarizedSet& set, std::span<const double> x);
inline bool membership(const PolarizedSet& set, const SpherePoint& x) {
  return membership(set, x.coords());
}

struct MeasureEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Normalized volume of a cap of the given geodesic radius.
double cap_measure(Dimension d, double radius);
/// Inverse of cap_measure by bisection.
double cap_radius_from_measure(Dimension d, double v);

/// m(C1 symmetric-difference C2) for two caps of equal radius whose centers
/// are s apart.
double cap_symm_diff_measure(Dimension d, double radius, double s);

/// Indicator Monte Carlo estimate of m({x : pred(x)}).
MeasureEstimate mc_measure(const PointPredicate& pred, Dimension d, std::size_t n_samples,
                           Rng& rng);
MeasureEstimate mc_measure(const PointPredicate& pred, Dimension d, std::size_t n_samples,
                           std::uint64_t seed);

MeasureEstimate mc_symm_diff(const PolarizedSet& a, const SetExpr& b, Dimension d,
                             std::size_t n_samples, Rng& rng);

struct PolarCap {
  Cap cap;
  MeasureEstimate measure;  // std_error 0 when exact
};

/// Cap centered at the north pole with the same measure as the set.
PolarCap polar_cap(const SetExpr& set, Dimension d, std::size_t mc_budget, Rng& rng);
PolarCap polar_cap(const PolarizedSet& set, Dimension d, std::size_t mc_budget, Rng& rng);

}  // namespace polarsphere
