#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "svdd/kernel.hpp"
#include "svdd/types.hpp"

namespace svdd {

// A trained data description: a soft minimum enclosing ball in Gaussian
// feature space. Immutable once built; safe to share across threads for
// scoring.
struct SvddModel {
  Matrix support_vectors;
  std::vector<double> alphas;       // aligned with support_vectors rows
  double bandwidth_s = 1.0;
  double penalty_C = 1.0;
  double r_squared = 0.0;
  double sum_alpha_k_alpha = 0.0;   // cached sum_ij a_i a_j K(x_i, x_j)

  std::size_t dimension() const { return support_vectors.cols(); }
  std::size_t support_vector_count() const { return support_vectors.rows(); }

  // sum_i a_i K(x_i, x_i) - sum_ij a_i a_j K(x_i, x_j), the value the dual
  // solver maximizes. For the Gaussian kernel this is 1 - sum_alpha_k_alpha.
  double dual_objective() const;
};

// dist^2(z) = K(z,z) - 2 sum_i a_i K(x_i, z) + sum_ij a_i a_j K(x_i, x_j).
// Nonnegative; tiny negative values from cancellation are clamped to 0.
double score_distance2(const SvddModel& model, Observation z);
double score_distance(const SvddModel& model, Observation z);

enum class Region { inside, outside };

// outside iff dist^2(z) > R^2; equality counts as inside.
Region classify_outlier(const SvddModel& model, Observation z);

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const SvddModel& model,
                             const std::string& class_label = "");
SvddModel model_from_json(const nlohmann::json& doc,
                          std::string* class_label = nullptr);

void save_model(const SvddModel& model, const std::filesystem::path& path,
                const std::string& class_label = "");
SvddModel load_model(const std::filesystem::path& path,
                     std::string* class_label = nullptr);

}  // namespace svdd
