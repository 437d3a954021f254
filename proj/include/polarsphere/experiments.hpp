#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polarsphere/error.hpp"
#include "polarsphere/parallel.hpp"
#include "polarsphere/set_model.hpp"
#include "polarsphere/sphere.hpp"
#include "polarsphere/stats.hpp"

namespace polarsphere {

// ---------------------------------------------------------------------------
// Convergence of E[m(S_{U1..Un} A sym-diff A*)]

struct ConvergenceRow {
  std::size_t n = 0;
  MeasureEstimate estimate;  // mean / std_error over trials
  double scaled = 0.0;       // n * mean
};

struct ConvergenceTable {
  int d = 1;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string set;
  bool exact_cap_tracking = false;
  std::vector<ConvergenceRow> rows;
};

inline constexpr std::size_t kGeneralSetDepthLimit = 18;

struct ConvergenceOptions {
  std::size_t mc_samples = 2000;       // per trial and row, general sets only
  std::size_t polar_budget = 100000;   // MC budget for A* of a general set
  std::size_t depth_limit = kGeneralSetDepthLimit;
  ParallelConfig parallel;
};

/// Caps are tracked exactly through their centers; other sets go through the
/// membership oracle with MC measure estimates. Rows are n = 0..n_max.
/// Throws DepthLimitError for a general set with n_max > options.depth_limit.
ConvergenceTable convergence_experiment(const SetExpr& a, Dimension d, std::size_t n_max,
                                        std::size_t trials, std::uint64_t seed,
                                        const ConvergenceOptions& options = {});

/// Per-row trial kernel for a cap: writes m(cap_k sym-diff A*) for k = 0..rows-1.
void cap_chain_kernel(const Cap& cap, Dimension d, std::uint64_t seed, std::size_t trial,
                      std::span<double> out);

struct Verdict {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::vector<Verdict> verdicts;
  bool passed() const;
};

inline constexpr double kSigmaBand = 4.0;

/// mean_n <= 2^d / n + 4 sigma_n for n >= 1, and the reciprocal recursion
/// 1/z_n >= 1/z_m + (n - m) with z = 2^{-d} mean, up to statistical slack.
CheckReport upper_bound_check(const ConvergenceTable& table, Dimension d,
                              double sigmas = kSigmaBand);

class FitNotApplicable : public DomainError {
 public:
  using DomainError::DomainError;
};

struct PowerLawFit {
  double C = 0.0;
  double p = 0.0;
  double residual = 0.0;  // RMS residual in log space
  std::size_t rows_used = 0;
  bool decaying = false;
};

inline constexpr std::size_t kDefaultBurnIn = 10;

/// Least squares of log(mean) against log(n) over rows with n >= burn_in:
/// mean ~ C n^{-p}.
PowerLawFit fit_power_law(const ConvergenceTable& table, std::size_t burn_in = kDefaultBurnIn);

// ---------------------------------------------------------------------------
// Hemisphere limits

struct LimitReport {
  int d = 1;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double scaled_mean = 0.0;  // n E[m(S A sym-diff A*)]
  double scaled_std_error = 0.0;
  double target = 0.0;
  double relative_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

LimitReport hemisphere_limit_check(Dimension d, double alpha, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, const ParallelConfig& parallel = {},
                                   double tolerance = 0.10);

struct GammaLimitReport {
  int d = 1;
  double alpha = 0.0;
  std::size_t n = 0;
  std::size_t trials = 0;
  KSReport ks;
  double threshold = 0.0;
  bool passed = false;
};

/// KS distance between n delta(tau_{U1..Un}(a), O) and pi Gamma(d).
GammaLimitReport gamma_limit_check(Dimension d, double alpha, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, const ParallelConfig& parallel = {},
                                   double threshold = 0.05);

/// delta(tau_{U1..Un}(a), O) for every trial, a at polar angle alpha.
std::vector<double> final_pole_distances(Dimension d, double alpha, std::size_t n,
                                         std::size_t trials, std::uint64_t seed,
                                         const ParallelConfig& parallel = {});

// ---------------------------------------------------------------------------
// Laws vs geometry

/// KS distance between geometric draws delta(tau_U(x), O), delta(x, O) = xi, and
/// the tail-law reference (atom included).
KSReport tau_law_geometry_ks(Dimension d, double xi, std::size_t trials, std::uint64_t seed,
                           const ParallelConfig& parallel = {});

struct TrinityReport {
  int d = 1;
  std::size_t n = 0;
  std::size_t trials = 0;
  double ell = 0.0;
  double ks_direct_exact = 0.0;
  double ks_chain_exact = 0.0;
  double ks_direct_chain = 0.0;
  bool passed(double threshold) const;
};

/// Direct order-statistic simulation, the equality chain (started from the same
/// random Y~_0), and the exact binomial tail, compared pairwise.
TrinityReport orderstat_trinity(Dimension d, std::size_t n, double ell, std::size_t trials,
                                std::uint64_t seed, const ParallelConfig& parallel = {});

struct DominationRow {
  double eta = 0.0;
  double geometric_tail = 0.0;
  double std_error = 0.0;
  double orderstat_tail = 0.0;
  bool passed = true;
};

struct DominationReport {
  int d = 1;
  double xi = 0.0;
  double ell = 0.0;
  double y0 = 0.0;  // chord distance 2 sin(xi / 2)
  std::size_t n = 0;
  std::size_t trials = 0;
  double sigmas = kSigmaBand;
  std::vector<DominationRow> rows;
  bool passed = true;
  double ell_max_empirical = 0.0;
};

/// Geometric chord tail P(Y_n > eta) against P(Y~_n > eta | Y~_0 = Y_0) on a
/// grid of eta in [0, Y_0].
DominationReport domination_check(Dimension d, double xi, double ell, std::size_t n,
                                  std::size_t trials, std::uint64_t seed,
                                  const ParallelConfig& parallel = {}, std::size_t grid = 50,
                                  double sigmas = kSigmaBand);

// ---------------------------------------------------------------------------
// Two-set identity for one polarization

struct IdentityEntry {
  std::vector<double> axis;
  SampleSummary lhs;   // m(S_u A cap S_u B) - m(A cap B)
  SampleSummary rhs;   // integral of I_{A\B}(x) I_{B\A}(sigma_u x)
  SampleSummary diff;  // paired lhs - rhs
  bool agree = true;
  bool lhs_nonnegative = true;
  bool rhs_nonnegative = true;
  bool passed() const { return agree && lhs_nonnegative && rhs_nonnegative; }
};

struct IdentityReport {
  std::vector<IdentityEntry> entries;
  double sigmas = kSigmaBand;
  bool passed() const;
};

/// Both sides from the same sample points (common random numbers).
IdentityEntry identity_check_axis(const SetExpr& a, const SetExpr& b, const ReflectionAxis& u,
                                  Dimension d, std::size_t samples, Rng& rng,
                                  double sigmas = kSigmaBand);

IdentityReport identity_check(const SetExpr& a, const SetExpr& b, Dimension d,
                              std::size_t trials_axes, std::size_t samples, std::uint64_t seed,
                              const ParallelConfig& parallel = {}, double sigmas = kSigmaBand);

}  // namespace polarsphere
