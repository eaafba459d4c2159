#include "svdd/dataprep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "svdd/errors.hpp"
#include "svdd/rng.hpp"

namespace svdd {

std::vector<std::size_t> SampleTable::class_histogram() const {
  std::vector<std::size_t> counts(classes.size(), 0);
  for (int label : labels) counts[static_cast<std::size_t>(label)]++;
  return counts;
}

Matrix SampleTable::class_features(int class_id) const {
  Matrix out(0, band_count());
  for (std::size_t i = 0; i < size(); ++i) {
    if (labels[i] == class_id) out.append_row(features.row(i));
  }
  return out;
}

const std::string& SampleTable::class_name(int class_id) const {
  return classes.at(static_cast<std::size_t>(class_id)).name;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t line_no, std::size_t column) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty() || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": column " +
                         std::to_string(column + 1) + ": '" + cell +
                         "' is not a finite number",
                     line_no);
  }
  return value;
}

struct CsvBody {
  std::vector<std::string> header;
  Matrix features;
  std::vector<std::string> raw_labels;  // empty when no label column
  bool has_label = false;
};

CsvBody read_csv(const std::filesystem::path& path, bool require_label) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  CsvBody body;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t feature_cols = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!header_seen) {
      for (auto& c : cells) c = trim(c);
      body.header = cells;
      body.has_label = !cells.empty() && cells.back() == "label";
      if (require_label && !body.has_label) {
        throw FormatError(path.string() +
                          ": header must end with a 'label' column");
      }
      feature_cols = cells.size() - (body.has_label ? 1 : 0);
      if (feature_cols == 0) {
        throw FormatError(path.string() + ": no feature columns in header");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != body.header.size()) {
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        ": expected " + std::to_string(body.header.size()) +
                        " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> row(feature_cols);
    for (std::size_t j = 0; j < feature_cols; ++j) {
      row[j] = parse_cell(cells[j], line_no, j);
    }
    body.features.append_row(row);
    if (body.has_label) {
      const std::string label = trim(cells.back());
      if (label.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": empty label",
                         line_no);
      }
      body.raw_labels.push_back(label);
    }
  }
  if (!header_seen) throw FormatError(path.string() + ": missing header row");
  if (body.features.rows() == 0) {
    throw InputError(path.string() + ": no data rows");
  }
  return body;
}

}  // namespace

SampleTable load_samples(const std::filesystem::path& path) {
  CsvBody body = read_csv(path, /*require_label=*/true);

  SampleTable table;
  table.features = std::move(body.features);
  table.band_names.assign(body.header.begin(), body.header.end() - 1);
  table.provenance.source = path.string();

  // Class ids follow first appearance in the file.
  std::unordered_map<std::string, int> ids;
  for (const auto& name : body.raw_labels) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(table.classes.size()));
    if (inserted) {
      table.classes.push_back({it->second, name});
    }
    table.labels.push_back(it->second);
  }
  return table;
}

Matrix load_unlabeled(const std::filesystem::path& path) {
  return read_csv(path, /*require_label=*/false).features;
}

void save_samples(const SampleTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "# source: " << table.provenance.source << '\n';
  for (const auto& step : table.provenance.steps) out << "# step: " << step << '\n';
  for (const auto& warning : table.provenance.warnings) {
    out << "# warning: " << warning << '\n';
  }
  for (std::size_t j = 0; j < table.band_names.size(); ++j) {
    out << table.band_names[j] << ',';
  }
  out << "label\n";
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto row = table.features.row(i);
    for (double v : row) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ',';
    }
    out << table.class_name(table.labels[i]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

SampleTable correct_saturation(SampleTable table, double threshold) {
  if (!(threshold > 0.0)) throw InputError("saturation threshold must be positive");
  std::size_t replaced = 0;
  for (double& v : table.features.data()) {
    if (v > threshold) {
      v = 0.0;
      ++replaced;
    }
  }
  table.provenance.saturation_replacements += replaced;
  char step[96];
  std::snprintf(step, sizeof(step), "correct_saturation(threshold=%.17g, replaced=%zu)",
                threshold, replaced);
  table.provenance.steps.emplace_back(step);
  return table;
}

SampleTable max_normalize(SampleTable table) {
  double max_value = -std::numeric_limits<double>::infinity();
  bool negative = false;
  for (double v : table.features.data()) {
    max_value = std::max(max_value, v);
    negative = negative || v < 0.0;
  }
  if (!(max_value > 0.0)) {
    throw DegenerateDataError("max normalization needs a positive global maximum");
  }
  if (negative) {
    table.provenance.warnings.emplace_back(
        "negative values present; normalized range is not confined to [0, 1]");
  }
  for (double& v : table.features.data()) v /= max_value;
  table.provenance.normalization_max = max_value;
  char step[96];
  std::snprintf(step, sizeof(step), "max_normalize(max=%.17g)", max_value);
  table.provenance.steps.emplace_back(step);
  return table;
}

std::pair<SampleTable, SampleTable> stratified_split(const SampleTable& table,
                                                     const SplitPlan& plan,
                                                     std::uint32_t repetition) {
  if (!(plan.train_fraction > 0.0) || !(plan.train_fraction < 1.0)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  if (table.size() == 0) throw InputError("cannot split an empty table");

  const auto histogram = table.class_histogram();
  std::vector<bool> in_train(table.size(), false);
  std::vector<std::string> warnings;

  for (std::size_t c = 0; c < table.classes.size(); ++c) {
    std::vector<std::size_t> indices;
    indices.reserve(histogram[c]);
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table.labels[i] == static_cast<int>(c)) indices.push_back(i);
    }
    if (indices.empty()) continue;

    // Round half up, floor of one training sample per class.
    const double want =
        plan.train_fraction * static_cast<double>(indices.size());
    std::size_t k = static_cast<std::size_t>(std::floor(want + 0.5));
    k = std::clamp<std::size_t>(k, 1, indices.size());
    if (indices.size() == 1) {
      warnings.push_back("class '" + table.classes[c].name +
                         "' has a single sample; its test side is empty");
    }

    DeterministicRng rng(plan.seed, repetition, static_cast<std::uint64_t>(c));
    rng.shuffle(indices);
    std::sort(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) in_train[indices[i]] = true;
  }

  auto make_side = [&](bool train_side) {
    SampleTable side;
    side.features = Matrix(0, table.band_count());
    side.classes = table.classes;
    side.band_names = table.band_names;
    side.provenance = table.provenance;
    char step[128];
    std::snprintf(step, sizeof(step),
                  "stratified_split(fraction=%g, seed=%llu, repetition=%u, side=%s)",
                  plan.train_fraction,
                  static_cast<unsigned long long>(plan.seed), repetition,
                  train_side ? "train" : "test");
    side.provenance.steps.emplace_back(step);
    side.provenance.warnings.insert(side.provenance.warnings.end(),
                                    warnings.begin(), warnings.end());
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (in_train[i] == train_side) {
        side.features.append_row(table.features.row(i));
        side.labels.push_back(table.labels[i]);
      }
    }
    return side;
  };

  return {make_side(true), make_side(false)};
}

}  // namespace svdd
