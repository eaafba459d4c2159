#pragma once

#include "svdd/types.hpp"

namespace svdd {

struct KernelParams {
  double bandwidth_s = 1.0;
};

double squared_distance(Observation a, Observation b);

// exp(-||a - b||^2 / (2 s^2)). Symmetric, in (0, 1], equal to 1 iff a == b.
double gaussian_kernel(Observation a, Observation b, const KernelParams& params);

}  // namespace svdd
