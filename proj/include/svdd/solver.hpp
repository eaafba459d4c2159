#pragma once

#include <cstdint>
#include <list>
#include <memory>
#include <vector>

#include "svdd/model.hpp"
#include "svdd/types.hpp"

namespace svdd {

struct SolverSettings {
  // Expected outlier fraction f; sets C = 1/(n f) at train time.
  // Values <= 0 select the default f = 1/n, i.e. C = 1.
  double outlier_fraction_f = 0.0;
  double kkt_tolerance = 1e-6;
  // Pair updates allowed; 0 selects 100*n, hard-capped at 1e7.
  std::uint64_t max_iterations = 0;
  // Multipliers at or below this are treated as exactly zero and the point
  // is excluded from the stored support vector set.
  double alpha_zero_tolerance = 1e-8;
};

// Lazily computed Gaussian kernel matrix rows. Every row stays resident
// while n <= full_cache_limit; above that a fixed budget of rows is kept
// with least-recently-used eviction.
class KernelCache {
public:
  KernelCache(const Matrix& data, double bandwidth_s,
              std::size_t full_cache_limit = 8192);

  std::span<const double> row(std::size_t i);
  std::size_t size() const { return n_; }
  std::uint64_t rows_computed() const { return rows_computed_; }

private:
  const Matrix& data_;
  double inv_two_s2_;
  std::size_t n_;
  std::size_t max_resident_;
  std::vector<std::unique_ptr<std::vector<double>>> rows_;
  std::list<std::size_t> lru_;                          // front = most recent
  std::vector<std::list<std::size_t>::iterator> lru_pos_;
  std::size_t resident_ = 0;
  std::uint64_t rows_computed_ = 0;
};

// Trains the Gaussian-kernel SVDD dual
//   max  sum_i a_i K(x_i,x_i) - sum_ij a_i a_j K(x_i,x_j)
//   s.t. sum_i a_i = 1,  0 <= a_i <= C
// with a two-coordinate decomposition that updates the maximal
// KKT-violating pair each step, so the simplex constraint holds exactly
// throughout. Throws ConvergenceError when the iteration budget runs out,
// carrying the best iterate's gap and objective.
SvddModel train_svdd(const Matrix& data, const KernelParams& params,
                     const SolverSettings& settings = {});

// Effective penalty for a given sample count, C = 1/(n f).
double penalty_for(std::size_t n, const SolverSettings& settings);

}  // namespace svdd
