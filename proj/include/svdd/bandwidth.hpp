#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "svdd/errors.hpp"
#include "svdd/solver.hpp"
#include "svdd/types.hpp"

namespace svdd {

enum class BandwidthMethod { var, mean, peak, modified_mean };
enum class DeltaMode { fixed_point, polynomial };

const char* to_string(BandwidthMethod method);
const char* to_string(DeltaMode mode);
std::optional<BandwidthMethod> bandwidth_method_from_string(std::string_view name);

struct VarianceSummary {
  std::size_t n = 0;                    // observation count
  std::size_t p = 0;                    // dimension count
  std::vector<double> per_dim_variance; // population convention, divisor N
  double variance_sum = 0.0;
};

struct SweepPoint {
  double s = 0.0;
  double dual_objective = 0.0;
  double smoothed = 0.0;
  double second_derivative = 0.0;       // NaN at the grid endpoints
};

struct BandwidthSelection {
  BandwidthMethod method = BandwidthMethod::var;
  double s = 0.0;
  std::optional<double> delta;          // mean / modified mean
  std::optional<int> iterations;        // fixed-point mode
  std::vector<SweepPoint> sweep;        // peak only
};

struct PeakSweepConfig {
  std::vector<double> s_grid;           // strictly increasing, positive
  int smoothing_window = 5;             // odd; 1 disables smoothing
  SolverSettings solver_settings;
};

// The objective curve never develops a usable second-derivative zero;
// carries the full sweep for diagnosis.
class SweepZeroNotFound : public Error {
public:
  SweepZeroNotFound(const std::string& what, std::vector<SweepPoint> sweep)
      : Error(what), sweep_(std::move(sweep)) {}
  const std::vector<SweepPoint>& sweep() const { return sweep_; }

private:
  std::vector<SweepPoint> sweep_;
};

VarianceSummary summarize_variance(const Matrix& data);

// s = sqrt(sum_j var_j).
BandwidthSelection var_criterion(const VarianceSummary& summary);

// s = sqrt(2 N sum_j var_j / ((N-1) ln((N-1)/delta^2))). Keeps the kernel
// matrix distinguishable from the identity; larger delta, larger distance.
BandwidthSelection mean_criterion(const VarianceSummary& summary, double delta);

struct FixedPointResult {
  double delta = 0.0;
  int iterations = 0;
};

// Solves delta = [ln(N-1) - 2 ln(delta)]^(-3/2) by fixed-point iteration
// from delta_0 (1 by default). Stops when successive iterates differ by at
// most `tolerance`.
FixedPointResult solve_delta_fixed_point(std::size_t n, double tolerance = 1e-12,
                                         int max_iter = 100, double delta0 = 1.0);

// Quartic fit of the fixed point in phi = 1/ln(N-1).
double delta_polynomial(std::size_t n);

// Mean criterion with delta computed from N alone.
BandwidthSelection modified_mean_criterion(const VarianceSummary& summary,
                                           DeltaMode mode = DeltaMode::fixed_point);

struct SweepAnalysis {
  std::vector<SweepPoint> points;
  std::size_t inflection_index = 0;
};

// Smooths the objective curve with a centered moving average, takes central
// second differences (nonuniform grid aware), and locates the first point
// where the second derivative reaches zero: a sign change, or a drop below
// 1e-3 of the curve's peak |f''| after a significant value has been seen.
// Throws SweepZeroNotFound for flat curves and curves with no crossing.
SweepAnalysis analyze_sweep(std::span<const double> s_grid,
                            std::span<const double> objectives,
                            int smoothing_window);

// Trains one SVDD per grid bandwidth, then runs analyze_sweep on the
// optimal dual objective curve. Grid points are independent problems and
// may train concurrently; output ordering follows the grid.
BandwidthSelection peak_criterion(const Matrix& data, const PeakSweepConfig& config,
                                  int threads = 1);

// Geometric grid centered on the mean-criterion scale with the polynomial
// delta: [span_low * s_mm, span_high * s_mm].
PeakSweepConfig default_peak_config(const VarianceSummary& summary,
                                    const SolverSettings& solver_settings,
                                    int grid_points = 50, double span_low = 0.1,
                                    double span_high = 10.0,
                                    int smoothing_window = 5);

// Columns: s, dual_objective, smoothed_objective, second_derivative.
void write_sweep_csv(const std::vector<SweepPoint>& sweep, std::ostream& out);

}  // namespace svdd
