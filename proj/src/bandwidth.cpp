#include "svdd/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svdd/parallel.hpp"

namespace svdd {

const char* to_string(BandwidthMethod method) {
  switch (method) {
    case BandwidthMethod::var: return "var";
    case BandwidthMethod::mean: return "mean";
    case BandwidthMethod::peak: return "peak";
    case BandwidthMethod::modified_mean: return "modified_mean";
  }
  return "?";
}

const char* to_string(DeltaMode mode) {
  return mode == DeltaMode::fixed_point ? "fixed_point" : "polynomial";
}

std::optional<BandwidthMethod> bandwidth_method_from_string(std::string_view name) {
  if (name == "var") return BandwidthMethod::var;
  if (name == "mean") return BandwidthMethod::mean;
  if (name == "peak") return BandwidthMethod::peak;
  if (name == "modified_mean") return BandwidthMethod::modified_mean;
  return std::nullopt;
}

VarianceSummary summarize_variance(const Matrix& data) {
  if (data.rows() == 0) throw InputError("cannot summarize an empty data set");
  VarianceSummary summary;
  summary.n = data.rows();
  summary.p = data.cols();
  summary.per_dim_variance.assign(data.cols(), 0.0);

  std::vector<double> mean(data.cols(), 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < data.cols(); ++j) mean[j] += row[j];
  }
  for (double& m : mean) m /= static_cast<double>(data.rows());

  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row(i);
    for (std::size_t j = 0; j < data.cols(); ++j) {
      const double d = row[j] - mean[j];
      summary.per_dim_variance[j] += d * d;
    }
  }
  for (double& v : summary.per_dim_variance) {
    v /= static_cast<double>(data.rows());  // population convention
    summary.variance_sum += v;
  }
  return summary;
}

BandwidthSelection var_criterion(const VarianceSummary& summary) {
  if (!(summary.variance_sum > 0.0)) {
    throw DegenerateDataError("VAR criterion needs nonzero variance");
  }
  BandwidthSelection sel;
  sel.method = BandwidthMethod::var;
  sel.s = std::sqrt(summary.variance_sum);
  return sel;
}

namespace {

double mean_formula(std::size_t n, double variance_sum, double delta) {
  const double nm1 = static_cast<double>(n - 1);
  const double log_term = std::log(nm1 / (delta * delta));
  return std::sqrt(2.0 * static_cast<double>(n) * variance_sum /
                   (nm1 * log_term));
}

BandwidthSelection mean_selection(BandwidthMethod method,
                                  const VarianceSummary& summary, double delta) {
  if (!(summary.variance_sum > 0.0)) {
    throw DegenerateDataError("mean criterion needs nonzero variance");
  }
  BandwidthSelection sel;
  sel.method = method;
  sel.delta = delta;
  sel.s = mean_formula(summary.n, summary.variance_sum, delta);
  return sel;
}

}  // namespace

BandwidthSelection mean_criterion(const VarianceSummary& summary, double delta) {
  if (summary.n < 2) throw InputError("mean criterion needs at least 2 observations");
  if (!(delta > 0.0)) throw InvalidToleranceError("delta must be positive");
  if (delta * delta >= static_cast<double>(summary.n - 1)) {
    throw InvalidToleranceError("delta^2 must be below N-1 (delta=" +
                                std::to_string(delta) + ", N=" +
                                std::to_string(summary.n) + ")");
  }
  return mean_selection(BandwidthMethod::mean, summary, delta);
}

FixedPointResult solve_delta_fixed_point(std::size_t n, double tolerance,
                                         int max_iter, double delta0) {
  if (n < 3) throw InputError("fixed-point delta needs N >= 3");
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  const double log_nm1 = std::log(static_cast<double>(n - 1));
  double delta = delta0;
  for (int k = 1; k <= max_iter; ++k) {
    const double arg = log_nm1 - 2.0 * std::log(delta);
    if (!(arg > 0.0)) {
      throw ConvergenceError(
          "fixed-point iteration left its domain (delta^2 reached N-1) at "
          "iteration " + std::to_string(k),
          static_cast<std::uint64_t>(k), arg, delta);
    }
    const double next = std::pow(arg, -1.5);
    const double step = std::abs(next - delta);
    delta = next;
    if (step <= tolerance) return {delta, k};
  }
  throw ConvergenceError("fixed-point iteration did not converge within " +
                             std::to_string(max_iter) + " iterations",
                         static_cast<std::uint64_t>(max_iter), tolerance, delta);
}

double delta_polynomial(std::size_t n) {
  if (n < 3) throw InputError("polynomial delta needs N >= 3");
  const double phi = 1.0 / std::log(static_cast<double>(n - 1));
  // Quartic fit coefficients, highest order first.
  return (((-0.14818008 * phi + 0.284623624) * phi - 0.252853808) * phi +
          0.159059498) * phi - 0.001381145;
}

BandwidthSelection modified_mean_criterion(const VarianceSummary& summary,
                                           DeltaMode mode) {
  if (summary.n < 3) throw InputError("modified mean criterion needs N >= 3");
  double delta = 0.0;
  std::optional<int> iterations;
  if (mode == DeltaMode::fixed_point) {
    const FixedPointResult fp = solve_delta_fixed_point(summary.n);
    delta = fp.delta;
    iterations = fp.iterations;
  } else {
    delta = delta_polynomial(summary.n);
  }
  BandwidthSelection sel =
      mean_selection(BandwidthMethod::modified_mean, summary, delta);
  sel.iterations = iterations;
  return sel;
}

SweepAnalysis analyze_sweep(std::span<const double> s_grid,
                            std::span<const double> objectives,
                            int smoothing_window) {
  if (s_grid.size() != objectives.size()) {
    throw InputError("sweep grid and objective lengths differ");
  }
  const std::size_t n = s_grid.size();
  if (n < 5) throw InputError("sweep needs at least 5 grid points");
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    throw InputError("smoothing window must be a positive odd integer");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(s_grid[i] > 0.0)) throw InputError("sweep grid must be positive");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) {
      throw InputError("sweep grid must be strictly increasing");
    }
  }

  SweepAnalysis analysis;
  analysis.points.resize(n);

  const std::size_t half = static_cast<std::size_t>(smoothing_window) / 2;
  double max_abs_f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Centered moving average; the window shrinks symmetrically at the ends.
    const std::size_t h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (std::size_t k = i - h; k <= i + h; ++k) sum += objectives[k];
    analysis.points[i].s = s_grid[i];
    analysis.points[i].dual_objective = objectives[i];
    analysis.points[i].smoothed = sum / static_cast<double>(2 * h + 1);
    max_abs_f = std::max(max_abs_f, std::abs(objectives[i]));
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  analysis.points.front().second_derivative = nan;
  analysis.points.back().second_derivative = nan;
  double max_abs_dd = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = s_grid[i] - s_grid[i - 1];
    const double hp = s_grid[i + 1] - s_grid[i];
    const double fm = analysis.points[i - 1].smoothed;
    const double fi = analysis.points[i].smoothed;
    const double fp = analysis.points[i + 1].smoothed;
    const double dd = 2.0 * (fm / (hm * (hm + hp)) - fi / (hm * hp) +
                             fp / (hp * (hm + hp)));
    analysis.points[i].second_derivative = dd;
    max_abs_dd = std::max(max_abs_dd, std::abs(dd));
  }

  if (max_abs_dd <= 1e-12 * std::max(1.0, max_abs_f)) {
    throw SweepZeroNotFound("objective curve has no usable curvature",
                            analysis.points);
  }

  // First zero after the curve establishes itself: a drop below the
  // relative threshold, or a sign change between neighbors.
  const double threshold = 1e-3 * max_abs_dd;
  bool significant_seen = false;
  std::size_t last_significant = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dd = analysis.points[i].second_derivative;
    if (std::abs(dd) <= threshold) {
      if (significant_seen) {
        analysis.inflection_index = i;
        return analysis;
      }
      continue;
    }
    if (significant_seen &&
        std::signbit(dd) !=
            std::signbit(analysis.points[last_significant].second_derivative)) {
      const double prev = analysis.points[last_significant].second_derivative;
      analysis.inflection_index = std::abs(dd) < std::abs(prev) ? i : last_significant;
      return analysis;
    }
    significant_seen = true;
    last_significant = i;
  }
  throw SweepZeroNotFound("second derivative never reaches zero inside the grid",
                          analysis.points);
}

BandwidthSelection peak_criterion(const Matrix& data, const PeakSweepConfig& config,
                                  int threads) {
  const std::size_t n = config.s_grid.size();
  if (n < 5) throw InputError("peak sweep needs at least 5 grid points");

  std::vector<double> objectives(n);
  std::vector<std::string> failures(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      const SvddModel model = train_svdd(data, KernelParams{config.s_grid[i]},
                                         config.solver_settings);
      objectives[i] = model.dual_objective();
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("peak sweep failed at s=" +
                                 std::to_string(config.s_grid[i]) + ": " + e.what(),
                             e.iterations(), e.residual(), e.objective());
    }
  });

  SweepAnalysis analysis =
      analyze_sweep(config.s_grid, objectives, config.smoothing_window);
  BandwidthSelection sel;
  sel.method = BandwidthMethod::peak;
  sel.s = analysis.points[analysis.inflection_index].s;
  sel.sweep = std::move(analysis.points);
  return sel;
}

PeakSweepConfig default_peak_config(const VarianceSummary& summary,
                                    const SolverSettings& solver_settings,
                                    int grid_points, double span_low,
                                    double span_high, int smoothing_window) {
  if (grid_points < 5) throw InputError("peak grid needs at least 5 points");
  if (!(span_low > 0.0) || !(span_high > span_low)) {
    throw InputError("peak span must satisfy 0 < low < high");
  }
  // The polynomial delta keeps the default total for any N >= 3.
  BandwidthSelection center =
      modified_mean_criterion(summary, DeltaMode::polynomial);
  PeakSweepConfig config;
  config.smoothing_window = smoothing_window;
  config.solver_settings = solver_settings;
  config.s_grid.resize(static_cast<std::size_t>(grid_points));
  const double lo = span_low * center.s;
  const double ratio = span_high / span_low;
  for (int i = 0; i < grid_points; ++i) {
    config.s_grid[static_cast<std::size_t>(i)] =
        lo * std::pow(ratio, static_cast<double>(i) /
                                 static_cast<double>(grid_points - 1));
  }
  return config;
}

void write_sweep_csv(const std::vector<SweepPoint>& sweep, std::ostream& out) {
  out << "s,dual_objective,smoothed_objective,second_derivative\n";
  char buf[160];
  for (const auto& p : sweep) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.s,
                  p.dual_objective, p.smoothed, p.second_derivative);
    out << buf;
  }
}

}  // namespace svdd
