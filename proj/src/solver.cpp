#include "svdd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svdd/errors.hpp"

namespace svdd {

KernelCache::KernelCache(const Matrix& data, double bandwidth_s,
                         std::size_t full_cache_limit)
    : data_(data),
      inv_two_s2_(1.0 / (2.0 * bandwidth_s * bandwidth_s)),
      n_(data.rows()),
      rows_(data.rows()),
      lru_pos_(data.rows()) {
  if (!(bandwidth_s > 0.0)) throw InputError("bandwidth must be positive");
  if (n_ <= full_cache_limit) {
    max_resident_ = n_;
  } else {
    // Keep the same byte budget a full cache at the limit would use.
    const std::size_t budget = full_cache_limit * full_cache_limit;
    max_resident_ = std::max<std::size_t>(16, budget / n_);
  }
}

std::span<const double> KernelCache::row(std::size_t i) {
  if (rows_[i]) {
    if (max_resident_ < n_ && lru_.begin() != lru_pos_[i]) {
      lru_.splice(lru_.begin(), lru_, lru_pos_[i]);
    }
    return {rows_[i]->data(), n_};
  }
  if (resident_ >= max_resident_) {
    const std::size_t victim = lru_.back();
    lru_.pop_back();
    rows_[victim].reset();
    --resident_;
  }
  auto fresh = std::make_unique<std::vector<double>>(n_);
  const auto xi = data_.row(i);
  for (std::size_t j = 0; j < n_; ++j) {
    const auto xj = data_.row(j);
    double d2 = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      const double d = xi[k] - xj[k];
      d2 += d * d;
    }
    (*fresh)[j] = std::exp(-d2 * inv_two_s2_);
  }
  rows_[i] = std::move(fresh);
  lru_.push_front(i);
  lru_pos_[i] = lru_.begin();
  ++resident_;
  ++rows_computed_;
  return {rows_[i]->data(), n_};
}

double penalty_for(std::size_t n, const SolverSettings& settings) {
  if (n == 0) throw InputError("cannot train on an empty data set");
  double f = settings.outlier_fraction_f;
  if (f <= 0.0) f = 1.0 / static_cast<double>(n);
  if (f > 1.0) {
    throw InputError("outlier fraction f must be in (0, 1]; got " +
                     std::to_string(f));
  }
  return 1.0 / (static_cast<double>(n) * f);
}

namespace {

constexpr std::uint64_t kHardIterationCap = 10'000'000;

struct PairSelection {
  std::ptrdiff_t up = -1;    // argmax gradient among alpha < C
  std::ptrdiff_t down = -1;  // argmin gradient among alpha > 0
  double gap = 0.0;
};

PairSelection select_pair(const std::vector<double>& alpha,
                          const std::vector<double>& grad, double c) {
  PairSelection sel;
  double g_up = -std::numeric_limits<double>::infinity();
  double g_down = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if (alpha[k] < c && grad[k] > g_up) {
      g_up = grad[k];
      sel.up = static_cast<std::ptrdiff_t>(k);
    }
    if (alpha[k] > 0.0 && grad[k] < g_down) {
      g_down = grad[k];
      sel.down = static_cast<std::ptrdiff_t>(k);
    }
  }
  sel.gap = (sel.up >= 0 && sel.down >= 0)
                ? g_up - g_down
                : 0.0;  // box fully determined; nothing can move
  return sel;
}

// W(alpha) = sum_i a_i K_ii - S. With sum_i a_i g_i = sum_i a_i K_ii - 2 S,
// both terms come from one pass over the maintained gradient.
double current_objective(const std::vector<double>& alpha,
                         const std::vector<double>& grad, KernelCache& cache) {
  double diag = 0.0;
  double ag = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] > 0.0) {
      diag += alpha[i] * cache.row(i)[i];
      ag += alpha[i] * grad[i];
    }
  }
  return 0.5 * (diag + ag);
}

// Moves sub-tolerance multipliers onto the best ascent coordinate so every
// stored alpha is exactly 0 or a real support weight. The simplex sum is
// preserved pairwise; the objective changes by O(alpha_j * gap).
void sweep_tiny_alphas(std::vector<double>& alpha, const std::vector<double>& grad,
                       double c, double zero_tol) {
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (alpha[j] <= 0.0 || alpha[j] >= zero_tol) continue;
    std::ptrdiff_t best = -1;
    double best_g = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (i == j || alpha[i] < zero_tol) continue;
      if (c - alpha[i] >= alpha[j] && grad[i] > best_g) {
        best_g = grad[i];
        best = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (best < 0) continue;  // no room anywhere; keep the straggler
    alpha[static_cast<std::size_t>(best)] += alpha[j];
    alpha[j] = 0.0;
  }
}

}  // namespace

SvddModel train_svdd(const Matrix& data, const KernelParams& params,
                     const SolverSettings& settings) {
  const std::size_t n = data.rows();
  if (n == 0) throw InputError("cannot train on an empty data set");
  if (!(params.bandwidth_s > 0.0)) throw InputError("bandwidth must be positive");
  for (double v : data.data()) {
    if (!std::isfinite(v)) throw InputError("training data contains non-finite values");
  }
  const double c = penalty_for(n, settings);
  const double zero_tol = settings.alpha_zero_tolerance;
  std::uint64_t max_iter = settings.max_iterations;
  if (max_iter == 0) max_iter = 100 * static_cast<std::uint64_t>(n);
  max_iter = std::min(max_iter, kHardIterationCap);

  KernelCache cache(data, params.bandwidth_s);

  // Uniform start is feasible for any C >= 1/n.
  std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
  std::vector<double> grad(n);  // g_i = K_ii - 2 sum_j a_j K_ij
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = cache.row(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += alpha[j] * row[j];
    grad[i] = row[i] - 2.0 * dot;
  }

  bool converged = false;
  std::uint64_t iterations = 0;
  double gap = 0.0;
  while (iterations < max_iter) {
    const PairSelection sel = select_pair(alpha, grad, c);
    gap = sel.gap;
    if (sel.up < 0 || sel.down < 0 || gap <= settings.kkt_tolerance) {
      converged = true;
      break;
    }
    const auto i = static_cast<std::size_t>(sel.up);
    const auto j = static_cast<std::size_t>(sel.down);
    const auto row_i = cache.row(i);
    const auto row_j = cache.row(j);

    const double eta = row_i[i] + row_j[j] - 2.0 * row_i[j];
    const double t_max = std::min(c - alpha[i], alpha[j]);
    double t = (eta > 1e-15) ? std::min(gap / (2.0 * eta), t_max) : t_max;

    // Keep the pair sum exact; land on the box bound when the step binds.
    const double pair_sum = alpha[i] + alpha[j];
    double ai = alpha[i] + t;
    if (t >= t_max) {
      ai = (t_max == c - alpha[i]) ? c : pair_sum;
    }
    ai = std::min(ai, std::min(c, pair_sum));
    const double applied = ai - alpha[i];
    alpha[i] = ai;
    alpha[j] = pair_sum - ai;

    for (std::size_t k = 0; k < n; ++k) {
      grad[k] -= 2.0 * applied * (row_i[k] - row_j[k]);
    }
    ++iterations;
  }

  if (!converged) {
    throw ConvergenceError(
        "SVDD dual did not converge: KKT gap " + std::to_string(gap) + " after " +
            std::to_string(iterations) + " pair updates (tolerance " +
            std::to_string(settings.kkt_tolerance) + ")",
        iterations, gap, current_objective(alpha, grad, cache));
  }

  sweep_tiny_alphas(alpha, grad, c, zero_tol);

  SvddModel model;
  model.bandwidth_s = params.bandwidth_s;
  model.penalty_C = c;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) kept.push_back(i);
  }
  for (const std::size_t i : kept) {
    model.support_vectors.append_row(data.row(i));
    model.alphas.push_back(alpha[i]);
  }

  double s_quad = 0.0;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const auto row = cache.row(kept[a]);
    double dot = 0.0;
    for (const std::size_t b : kept) dot += alpha[b] * row[b];
    s_quad += alpha[kept[a]] * dot;
  }
  model.sum_alpha_k_alpha = s_quad;

  // R^2 from Eq.-12 style scoring of boundary support vectors; averaging
  // smooths the within-tolerance spread. With every multiplier at a bound
  // there is no boundary vector, so fall back to the largest support-vector
  // distance, which keeps all of them contained.
  double r2_sum = 0.0;
  std::size_t r2_count = 0;
  double r2_max = 0.0;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const double d2 = score_distance2(model, model.support_vectors.row(a));
    const double av = model.alphas[a];
    if (av > zero_tol && av < c - zero_tol) {
      r2_sum += d2;
      ++r2_count;
    }
    r2_max = std::max(r2_max, d2);
  }
  model.r_squared = r2_count > 0 ? r2_sum / static_cast<double>(r2_count) : r2_max;
  return model;
}

}  // namespace svdd
