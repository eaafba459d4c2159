#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svdd/bandwidth.hpp"
#include "svdd/dataprep.hpp"
#include "svdd/multiclass.hpp"
#include "svdd/solver.hpp"

namespace svdd {

struct ExperimentConfig {
  std::filesystem::path dataset;
  bool apply_saturation = false;
  double saturation_threshold = 65500.0;
  bool normalize = true;
  std::vector<BandwidthMethod> methods;
  SplitPlan split;
  SolverSettings solver;
  BandwidthOptions bandwidth;
  std::filesystem::path output_dir;
  int threads = 1;
};

// 100 * (#matches / n).
double overall_accuracy(std::span<const int> predicted, std::span<const int> truth);

// One percentage per class id in [0, class_count); classes absent from
// `truth` are reported as NaN, never 0.
std::vector<double> per_class_accuracy(std::span<const int> predicted,
                                       std::span<const int> truth,
                                       std::size_t class_count);

struct RepetitionResult {
  bool failed = false;
  std::string error;
  double oa = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per_class;                       // NaN for absent classes
  std::vector<std::vector<std::uint64_t>> confusion;   // truth-major
};

struct MethodReport {
  std::vector<RepetitionResult> reps;
  double average_oa = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;                           // not serialized to JSON
};

struct ExperimentReport {
  std::vector<ClassLabel> classes;
  std::vector<std::pair<BandwidthMethod, MethodReport>> methods;  // config order
  // Peak diagnostics from the first repetition, one sweep per class.
  std::vector<std::pair<std::string, std::vector<SweepPoint>>> peak_sweeps;
  ExperimentConfig config;
  std::string rng_algorithm;
};

// Runs the full protocol: for each repetition the table splits once and the
// same split serves every method; each (method, repetition) cell trains a
// multiclass model on the train side and labels the test side. Failed cells
// record their cause and the run continues. Deterministic given the config;
// thread count never changes the numbers.
ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const SampleTable& table);

// Timing-free and key-ordered, so identical configs give byte-identical
// documents regardless of thread count.
nlohmann::json report_to_json(const ExperimentReport& report);

// Human-readable tables mirroring the JSON plus wall times.
std::string report_to_text(const ExperimentReport& report);

// report.json, report.txt, confusion_<method>_<rep>.csv and, for peak runs,
// sweep_<class>.csv under output_dir.
void write_report_files(const ExperimentReport& report,
                        const std::filesystem::path& output_dir);

}  // namespace svdd
