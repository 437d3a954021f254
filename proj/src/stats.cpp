#include "polarsphere/stats.hpp"

#include <algorithm>
#include <cmath>

#include "polarsphere/error.hpp"

namespace polarsphere {

SampleSummary mean_ci(std::span<const double> samples) {
  if (samples.empty()) throw UsageError("mean_ci: empty sample");
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return SampleSummary{mean, std::sqrt(ss / n / n), samples.size()};
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw UsageError("ecdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCdf ecdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

ReferenceCdf continuous_from_tail(std::function<double(double)> tail, std::string id) {
  return ReferenceCdf{[tail = std::move(tail)](double x) { return 1.0 - tail(x); }, {},
                      std::move(id)};
}

KSReport ks_statistic(std::vector<double> samples, const ReferenceCdf& ref) {
  if (samples.empty()) throw UsageError("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double v = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == v) ++j;
    const double below = static_cast<double>(i) / n;  // F_n(v-)
    const double at = static_cast<double>(j) / n;     // F_n(v)
    const double f = ref.cdf(v);
    const double f_left = ref.cdf_left ? ref.cdf_left(v) : f;
    d = std::max({d, std::abs(at - f), std::abs(below - f_left)});
    i = j;
  }
  return KSReport{std::min(d, 1.0), samples.size(), ref.id};
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw UsageError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace polarsphere
