#include "polarsphere/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace polarsphere {

double sine_power_integral(int k, double upper) {
  if (k == 0) return upper;
  if (k == 1) return 1.0 - std::cos(upper);
  // Reduction: I_k = -sin^{k-1} cos / k + (k-1)/k I_{k-2}.
  const double s = std::sin(upper);
  const double c = std::cos(upper);
  return -std::pow(s, k - 1) * c / k + (k - 1.0) / k * sine_power_integral(k - 2, upper);
}

}  // namespace polarsphere
