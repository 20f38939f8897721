#include "fleetplace/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace fleetplace {

double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 == 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  shuffle_in_place(perm, rng);
  return perm;
}

}  // namespace fleetplace
