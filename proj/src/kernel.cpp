#include "svdd/kernel.hpp"

#include <cmath>

#include "svdd/errors.hpp"

namespace svdd {

double squared_distance(Observation a, Observation b) {
  if (a.size() != b.size()) {
    throw InputError("observation dimension mismatch: " +
                     std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double gaussian_kernel(Observation a, Observation b, const KernelParams& params) {
  if (!(params.bandwidth_s > 0.0)) {
    throw InputError("Gaussian bandwidth must be positive");
  }
  const double d2 = squared_distance(a, b);
  return std::exp(-d2 / (2.0 * params.bandwidth_s * params.bandwidth_s));
}

}  // namespace svdd
