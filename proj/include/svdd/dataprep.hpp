#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "svdd/types.hpp"

namespace svdd {

struct ClassLabel {
  int id = 0;
  std::string name;

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

struct Provenance {
  std::string source;
  std::vector<std::string> steps;           // preprocessing applied, in order
  std::size_t saturation_replacements = 0;
  double normalization_max = 0.0;           // 0 until max_normalize runs
  std::vector<std::string> warnings;
};

// Labeled observation table: rows are pixels, columns are spectral bands,
// plus one class label per row. Immutable by convention after construction;
// the preprocessing functions below take and return tables by value.
struct SampleTable {
  Matrix features;
  std::vector<int> labels;                  // index into `classes`
  std::vector<ClassLabel> classes;          // ids contiguous from 0
  std::vector<std::string> band_names;
  Provenance provenance;

  std::size_t size() const { return features.rows(); }
  std::size_t band_count() const { return features.cols(); }
  std::vector<std::size_t> class_histogram() const;
  Matrix class_features(int class_id) const;
  const std::string& class_name(int class_id) const;
};

struct SplitPlan {
  double train_fraction = 0.30;
  std::uint64_t seed = 0;
  std::uint32_t repetitions = 5;
};

// CSV with a header row naming the band columns and a final `label` column.
// Lines starting with '#' are provenance comments and are skipped.
SampleTable load_samples(const std::filesystem::path& path);

// Unlabeled variant for scoring input; a trailing `label` column, when
// present, is ignored.
Matrix load_unlabeled(const std::filesystem::path& path);

void save_samples(const SampleTable& table, const std::filesystem::path& path);

// Feature values strictly greater than `threshold` are sensor saturation
// artifacts and become 0. Idempotent.
SampleTable correct_saturation(SampleTable table, double threshold = 65500.0);

// Divides every cell by the single global maximum over the whole table, so
// nonnegative data lands in [0, 1]. Idempotent.
SampleTable max_normalize(SampleTable table);

// Per class: round(train_fraction * n_class) samples, at least 1, selected
// by a deterministic RNG seeded from (plan.seed, repetition, class id).
// Both sides keep the full class list so label ids stay aligned.
std::pair<SampleTable, SampleTable> stratified_split(const SampleTable& table,
                                                     const SplitPlan& plan,
                                                     std::uint32_t repetition);

}  // namespace svdd
