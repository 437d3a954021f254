#include "polarsphere/parallel.hpp"

#include <cmath>
#include <limits>

namespace polarsphere {

double RowMoments::std_error(std::size_t row) const {
  const auto n = static_cast<double>(trials);
  const double m = sum[row] / n;
  const double second = sum_sq[row] / n;
  double var = second - m * m;
  // Below this the difference is rounding noise from the cancellation.
  if (var <= 64.0 * std::numeric_limits<double>::epsilon() * second) var = 0.0;
  return std::sqrt(var / n);
}

}  // namespace polarsphere
