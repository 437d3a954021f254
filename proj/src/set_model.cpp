#include "polarsphere/set_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <variant>

#include "polarsphere/error.hpp"
#include "polarsphere/quadrature.hpp"

namespace polarsphere {

using std::numbers::pi;

Cap::Cap(SpherePoint c, double r) : center(std::move(c)), radius(r) {
  if (!(r >= 0.0 && r <= pi)) throw UsageError("cap radius must lie in [0, pi]");
}

bool Cap::contains(std::span<const double> x) const {
  // delta(x, c) <= r  <=>  x.c >= cos r
  return dot(x, center.coords()) >= std::cos(radius);
}

Cap hemisphere(SpherePoint center) { return Cap(std::move(center), 0.5 * pi); }

// ---------------------------------------------------------------------------
// SetExpr

struct UnionNode {
  std::vector<SetExpr> parts;
};
struct InterNode {
  std::vector<SetExpr> parts;
};
struct ComplNode {
  SetExpr inner;
};
struct PredNode {
  PointPredicate pred;
  std::string label;
};

struct SetExpr::Node {
  std::variant<Cap, UnionNode, InterNode, ComplNode, PredNode> value;
};

SetExpr SetExpr::cap(Cap c) { return SetExpr(std::make_shared<const Node>(Node{std::move(c)})); }

SetExpr SetExpr::unite(std::vector<SetExpr> parts) {
  if (parts.empty()) throw UsageError("union needs at least one operand");
  return SetExpr(std::make_shared<const Node>(Node{UnionNode{std::move(parts)}}));
}

SetExpr SetExpr::intersect(std::vector<SetExpr> parts) {
  if (parts.empty()) throw UsageError("intersection needs at least one operand");
  return SetExpr(std::make_shared<const Node>(Node{InterNode{std::move(parts)}}));
}

SetExpr SetExpr::complement(SetExpr inner) {
  return SetExpr(std::make_shared<const Node>(Node{ComplNode{std::move(inner)}}));
}

SetExpr SetExpr::predicate(PointPredicate pred, std::string label) {
  if (!pred) throw UsageError("empty membership predicate");
  return SetExpr(std::make_shared<const Node>(Node{PredNode{std::move(pred), std::move(label)}}));
}

bool SetExpr::contains(std::span<const double> x) const {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Cap>) {
          return n.contains(x);
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          return std::any_of(n.parts.begin(), n.parts.end(),
                             [&](const SetExpr& p) { return p.contains(x); });
        } else if constexpr (std::is_same_v<T, InterNode>) {
          return std::all_of(n.parts.begin(), n.parts.end(),
                             [&](const SetExpr& p) { return p.contains(x); });
        } else if constexpr (std::is_same_v<T, ComplNode>) {
          return !n.inner.contains(x);
        } else {
          return n.pred(x);
        }
      },
      node_->value);
}

std::optional<Cap> SetExpr::as_cap() const {
  if (const auto* c = std::get_if<Cap>(&node_->value)) return *c;
  return std::nullopt;
}

std::string SetExpr::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        auto list = [&](const char* name, const std::vector<SetExpr>& parts) {
          out << name << '(';
          for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out << ',';
            out << parts[i].describe();
          }
          out << ')';
        };
        if constexpr (std::is_same_v<T, Cap>) {
          out << "cap[";
          for (std::size_t i = 0; i < n.center.size(); ++i) {
            if (i) out << ',';
            out << n.center[i];
          }
          out << "]:" << n.radius;
        } else if constexpr (std::is_same_v<T, UnionNode>) {
          list("union", n.parts);
        } else if constexpr (std::is_same_v<T, InterNode>) {
          list("inter", n.parts);
        } else if constexpr (std::is_same_v<T, ComplNode>) {
          out << "compl(" << n.inner.describe() << ')';
        } else {
          out << n.label;
        }
      },
      node_->value);
  return out.str();
}

// ---------------------------------------------------------------------------
// Membership oracle

namespace {

constexpr double kMemoQuantum = 1e-9;
// Short histories are cheaper to evaluate directly than to hash.
constexpr std::size_t kMemoMinDepth = 6;

struct MemoKey {
  std::size_t depth;
  std::vector<std::int64_t> q;
  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = std::hash<std::size_t>{}(k.depth);
    for (std::int64_t v : k.q) {
      h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

class MembershipEvaluator {
 public:
  explicit MembershipEvaluator(const PolarizedSet& set)
      : set_(set), use_memo_(set.history.size() >= kMemoMinDepth) {}

  // Membership of x in the set after the first k polarizations.
  bool eval(std::size_t k, std::span<const double> x) {
    if (k == 0) return set_.base.contains(x);
    MemoKey key;
    if (use_memo_) {
      key.depth = k;
      key.q.reserve(x.size());
      for (double c : x) key.q.push_back(std::llround(c / kMemoQuantum));
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const auto& u = set_.history[k - 1].coords();
    std::vector<double> xr(x.begin(), x.end());
    reflect_in_place(u, xr);
    // delta(x, O) <= delta(xr, O)  <=>  height(x) >= height(xr)
    const bool closer = x.back() >= xr.back();
    bool result;
    if (closer) {
      result = eval(k - 1, x) || eval(k - 1, xr);
    } else {
      result = eval(k - 1, x) && eval(k - 1, xr);
    }
    if (use_memo_) memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  const PolarizedSet& set_;
  bool use_memo_;
  std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
};

}  // namespace

bool membership(const PolarizedSet& set, std::span<const double> x) {
  if (set.history.size() > set.depth_limit) {
    throw DepthLimitError("polarization history of length " + std::to_string(set.history.size()) +
                          " exceeds the membership depth limit " +
                          std::to_string(set.depth_limit));
  }
  for (const auto& u : set.history) {
    if (u.size() != x.size()) throw UsageError("dimension mismatch between axis and point");
  }
  MembershipEvaluator ev(set);
  return ev.eval(set.history.size(), x);
}

// ---------------------------------------------------------------------------
// Measures

double cap_measure(Dimension d, double radius) {
  if (!(radius >= 0.0 && radius <= pi)) throw UsageError("cap radius must lie in [0, pi]");
  if (radius == 0.0) return 0.0;
  if (radius == pi) return 1.0;
  const int k = d.value() - 1;
  const double v = sine_power_integral(k, radius) / sine_power_integral(k, pi);
  return std::clamp(v, 0.0, 1.0);
}

double cap_radius_from_measure(Dimension d, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError("cap measure must lie in [0, 1]");
  if (v == 0.0) return 0.0;
  if (v == 1.0) return pi;
  double lo = 0.0;
  double hi = pi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = cap_measure(d, mid);
    if (m == v) return mid;
    (m < v ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Fraction of the circle of points at geodesic distance theta from c1 that lie
// in the cap of radius r around c2, where delta(c1, c2) = s.
double slice_fraction(Dimension d, double r, double s, double theta) {
  const double st = std::sin(theta);
  if (st == 0.0) {
    // Degenerate slice: a single point (theta = 0) or the antipode.
    const double dist = theta == 0.0 ? s : pi - s;
    return dist <= r ? 1.0 : 0.0;
  }
  const double c = (std::cos(r) - std::cos(theta) * std::cos(s)) / (st * std::sin(s));
  if (c >= 1.0) return 0.0;
  if (c <= -1.0) return 1.0;
  // S^0 = {+1, -1}; only +1 satisfies cos(phi) >= c here.
  if (d.value() == 1) return 0.5;
  return cap_measure(Dimension(d.value() - 1), std::acos(c));
}

double cap_intersection_measure(Dimension d, double r, double s) {
  const int k = d.value() - 1;
  std::vector<double> cuts{0.0, r};
  for (double b : {std::abs(s - r), s + r, 2.0 * pi - s - r}) {
    if (b > 0.0 && b < r) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate_endpoint_singular(
        [&](double t) { return std::pow(std::sin(t), k) * slice_fraction(d, r, s, t); }, cuts[i],
        cuts[i + 1]);
  }
  return total / sine_power_integral(k, pi);
}

}  // namespace

double cap_symm_diff_measure(Dimension d, double radius, double s) {
  if (!(radius >= 0.0 && radius <= pi)) throw UsageError("cap radius must lie in [0, pi]");
  if (!(s >= 0.0 && s <= pi)) throw UsageError("center distance must lie in [0, pi]");
  if (s == 0.0 || radius == 0.0 || radius == pi) return 0.0;
  if (radius == 0.5 * pi) return s / pi;
  if (d.value() == 1) {
    // Two arcs of length 2r on a circle of length 2 pi.
    const double len = 2.0 * radius;
    const double overlap =
        std::min(len, std::max(0.0, len - s) + std::max(0.0, len - (2.0 * pi - s)));
    return 2.0 * (len - overlap) / (2.0 * pi);
  }
  const double v = 2.0 * (cap_measure(d, radius) - cap_intersection_measure(d, radius, s));
  return std::clamp(v, 0.0, 1.0);
}

MeasureEstimate mc_measure(const PointPredicate& pred, Dimension d, std::size_t n_samples,
                           Rng& rng) {
  if (n_samples == 0) throw UsageError("Monte Carlo estimate needs at least one sample");
  std::vector<double> x(d.ambient());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    sample_unit_vector(x, rng);
    if (pred(x)) ++hits;
  }
  MeasureEstimate est;
  est.n_samples = n_samples;
  est.mean = static_cast<double>(hits) / static_cast<double>(n_samples);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(n_samples));
  return est;
}

MeasureEstimate mc_measure(const PointPredicate& pred, Dimension d, std::size_t n_samples,
                           std::uint64_t seed) {
  Rng rng(seed, streams::kMeasure);
  auto est = mc_measure(pred, d, n_samples, rng);
  est.seed = seed;
  return est;
}

MeasureEstimate mc_symm_diff(const PolarizedSet& a, const SetExpr& b, Dimension d,
                             std::size_t n_samples, Rng& rng) {
  if (a.history.size() > a.depth_limit) {
    throw DepthLimitError("polarization history exceeds the membership depth limit");
  }
  return mc_measure(
      [&](std::span<const double> x) { return membership(a, x) != b.contains(x); }, d,
      n_samples, rng);
}

PolarCap polar_cap(const SetExpr& set, Dimension d, std::size_t mc_budget, Rng& rng) {
  if (auto c = set.as_cap()) {
    MeasureEstimate exact;
    exact.mean = cap_measure(d, c->radius);
    return PolarCap{Cap(north_pole(d), c->radius), exact};
  }
  if (mc_budget == 0) throw UsageError("polar cap of a general set needs an MC budget >= 1");
  auto est = mc_measure([&](std::span<const double> x) { return set.contains(x); }, d,
                        mc_budget, rng);
  return PolarCap{Cap(north_pole(d), cap_radius_from_measure(d, est.mean)), est};
}

PolarCap polar_cap(const PolarizedSet& set, Dimension d, std::size_t mc_budget, Rng& rng) {
  // Polarization preserves measure, so the base set determines A*.
  return polar_cap(set.base, d, mc_budget, rng);
}

}  // namespace polarsphere
