#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "svdd/bandwidth.hpp"
#include "svdd/dataprep.hpp"
#include "svdd/model.hpp"
#include "svdd/solver.hpp"

namespace svdd {

struct BandwidthOptions {
  double mean_delta = 1e-6;                       // mean criterion default
  DeltaMode modified_mode = DeltaMode::fixed_point;
  int peak_grid_points = 50;
  double peak_span_low = 0.1;
  double peak_span_high = 10.0;
  int peak_smoothing_window = 5;
};

// Dispatches to the requested criterion over one class's training samples.
BandwidthSelection select_bandwidth(const Matrix& data, BandwidthMethod method,
                                    const BandwidthOptions& options,
                                    const SolverSettings& solver_settings,
                                    int threads = 1);

// One SVDD per class; every member selects its own bandwidth from its own
// training subset.
struct MulticlassModel {
  struct Member {
    ClassLabel label;
    SvddModel model;
    BandwidthSelection bandwidth;
  };

  std::vector<Member> classes;
  BandwidthMethod method = BandwidthMethod::var;

  std::size_t dimension() const {
    return classes.empty() ? 0 : classes.front().model.dimension();
  }
};

struct FusionDecision {
  ClassLabel assigned;
  std::vector<ClassLabel> inside_classes;   // dist_i <= R_i
  std::vector<double> ratios;               // dist_i / R_i, model order
};

MulticlassModel train_multiclass(const SampleTable& table, BandwidthMethod method,
                                 const SolverSettings& solver_settings,
                                 const BandwidthOptions& options = {},
                                 int threads = 1);

// Containment first: exactly one class whose boundary holds z wins outright.
// Zero or several containing classes fall through to argmin dist_i / R_i,
// evaluated in squared space (same argmin); ratio ties go to the lowest
// class id. R^2 is floored at 1e-12 so single-point classes keep the rule
// total.
FusionDecision fuse_label(const MulticlassModel& model, Observation z);

// Batch scoring; rows are independent and may be scored concurrently.
std::vector<int> fuse_labels(const MulticlassModel& model, const Matrix& rows,
                             int threads = 1);

inline constexpr int kMulticlassFormatVersion = 1;

nlohmann::json multiclass_to_json(const MulticlassModel& model);
MulticlassModel multiclass_from_json(const nlohmann::json& doc);

void save_multiclass(const MulticlassModel& model, const std::filesystem::path& path);
MulticlassModel load_multiclass(const std::filesystem::path& path);

}  // namespace svdd
