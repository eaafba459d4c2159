#include "svdd/model.hpp"

#include <cmath>
#include <fstream>

#include "svdd/errors.hpp"

namespace svdd {

double SvddModel::dual_objective() const {
  const KernelParams params{bandwidth_s};
  double diag = 0.0;
  for (std::size_t i = 0; i < support_vectors.rows(); ++i) {
    diag += alphas[i] * gaussian_kernel(support_vectors.row(i),
                                        support_vectors.row(i), params);
  }
  return diag - sum_alpha_k_alpha;
}

double score_distance2(const SvddModel& model, Observation z) {
  if (z.size() != model.dimension()) {
    throw InputError("scoring dimension mismatch: model has " +
                     std::to_string(model.dimension()) + " bands, observation has " +
                     std::to_string(z.size()));
  }
  const KernelParams params{model.bandwidth_s};
  double cross = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.rows(); ++i) {
    cross += model.alphas[i] *
             gaussian_kernel(model.support_vectors.row(i), z, params);
  }
  const double d2 = 1.0 - 2.0 * cross + model.sum_alpha_k_alpha;
  return d2 < 0.0 ? 0.0 : d2;
}

double score_distance(const SvddModel& model, Observation z) {
  return std::sqrt(score_distance2(model, z));
}

Region classify_outlier(const SvddModel& model, Observation z) {
  return score_distance2(model, z) > model.r_squared ? Region::outside
                                                     : Region::inside;
}

namespace {

void validate_model(const SvddModel& model) {
  if (!(model.bandwidth_s > 0.0)) throw FormatError("model: bandwidth_s must be positive");
  if (!(model.penalty_C > 0.0)) throw FormatError("model: penalty_C must be positive");
  if (model.r_squared < 0.0) throw FormatError("model: r_squared must be nonnegative");
  if (model.alphas.size() != model.support_vectors.rows()) {
    throw FormatError("model: alphas and support_vectors disagree in length");
  }
  if (model.alphas.empty()) throw FormatError("model: no support vectors");
  double sum = 0.0;
  for (double a : model.alphas) {
    if (!std::isfinite(a) || a < -1e-12 || a > model.penalty_C + 1e-12) {
      throw FormatError("model: alpha out of [0, C]");
    }
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw FormatError("model: alphas sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  for (double v : model.support_vectors.data()) {
    if (!std::isfinite(v)) throw FormatError("model: non-finite support vector entry");
  }
  // The cached quadratic term must match the stored vectors.
  const KernelParams params{model.bandwidth_s};
  double s = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.rows(); ++i) {
    for (std::size_t j = 0; j < model.support_vectors.rows(); ++j) {
      s += model.alphas[i] * model.alphas[j] *
           gaussian_kernel(model.support_vectors.row(i),
                           model.support_vectors.row(j), params);
    }
  }
  if (std::abs(s - model.sum_alpha_k_alpha) > 1e-7 * std::max(1.0, std::abs(s))) {
    throw FormatError("model: cached sum_alpha_k_alpha is inconsistent");
  }
}

}  // namespace

nlohmann::json model_to_json(const SvddModel& model, const std::string& class_label) {
  nlohmann::json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["bandwidth_s"] = model.bandwidth_s;
  doc["penalty_C"] = model.penalty_C;
  doc["r_squared"] = model.r_squared;
  doc["sum_alpha_k_alpha"] = model.sum_alpha_k_alpha;
  doc["alphas"] = model.alphas;
  auto svs = nlohmann::json::array();
  for (std::size_t i = 0; i < model.support_vectors.rows(); ++i) {
    const auto row = model.support_vectors.row(i);
    svs.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["support_vectors"] = std::move(svs);
  doc["class_label"] = class_label;
  return doc;
}

SvddModel model_from_json(const nlohmann::json& doc, std::string* class_label) {
  if (!doc.is_object()) throw FormatError("model document is not a JSON object");
  const auto version = doc.value("format_version", -1);
  if (version != kModelFormatVersion) {
    throw FormatError("unsupported model format_version " +
                      std::to_string(version) + ", expected " +
                      std::to_string(kModelFormatVersion));
  }
  SvddModel model;
  try {
    model.bandwidth_s = doc.at("bandwidth_s").get<double>();
    model.penalty_C = doc.at("penalty_C").get<double>();
    model.r_squared = doc.at("r_squared").get<double>();
    model.sum_alpha_k_alpha = doc.at("sum_alpha_k_alpha").get<double>();
    model.alphas = doc.at("alphas").get<std::vector<double>>();
    const auto& svs = doc.at("support_vectors");
    for (const auto& row : svs) {
      model.support_vectors.append_row(row.get<std::vector<double>>());
    }
    if (class_label != nullptr) {
      *class_label = doc.value("class_label", "");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  }
  if (!model.support_vectors.empty() &&
      model.support_vectors.data().size() !=
          model.support_vectors.rows() * model.support_vectors.cols()) {
    throw FormatError("model: ragged support vector rows");
  }
  validate_model(model);
  return model;
}

void save_model(const SvddModel& model, const std::filesystem::path& path,
                const std::string& class_label) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << model_to_json(model, class_label).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

SvddModel load_model(const std::filesystem::path& path, std::string* class_label) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return model_from_json(doc, class_label);
}

}  // namespace svdd
