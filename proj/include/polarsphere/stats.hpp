#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace polarsphere {

struct SampleSummary {
  double mean = 0.0;
  double std_error = 0.0;  // population sd / sqrt(n); equals the binomial formula for indicators
  std::size_t n = 0;
};

SampleSummary mean_ci(std::span<const double> samples);

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);
  double operator()(double x) const;
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf ecdf(std::vector<double> samples);

/// Reference law for KS: CDF and its left limit (they differ only at atoms).
struct ReferenceCdf {
  std::function<double(double)> cdf;
  std::function<double(double)> cdf_left;  // empty = continuous law
  std::string id;
};

/// Builds a reference from a tail function P(X > x) of a continuous law.
ReferenceCdf continuous_from_tail(std::function<double(double)> tail, std::string id);

struct KSReport {
  double statistic = 0.0;
  std::size_t n_samples = 0;
  std::string reference;
};

/// sup_x |F_n(x) - F(x)|, comparing one-sided limits at every sample value so
/// atoms in either distribution are handled.
KSReport ks_statistic(std::vector<double> samples, const ReferenceCdf& ref);

/// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace polarsphere
