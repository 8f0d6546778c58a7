#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "galaxyml/dataset.hpp"
#include "galaxyml/errors.hpp"

namespace galaxyml {

// Column-name mapping for the ingestion table. The defaults follow the
// Galaxy Zoo SDSS DR7 morphology table: spectra indicator, the six
// category vote fractions plus the combined spiral fraction, and the two
// debiased fractions, for ten numeric features; flag columns are the
// label source and are never ingested as features.
struct SchemaConfig {
  std::string id_column = "objid";
  std::vector<std::string> feature_columns = {
      "spectra", "p_el",         "p_cw",          "p_acw", "p_edge",
      "p_dk",    "p_mg",         "p_cs",          "p_el_debiased",
      "p_cs_debiased"};
  std::array<std::string, 3> flag_columns = {"spiral", "elliptical",
                                             "uncertain"};
};

struct RejectedRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::string reason;
};

struct IngestReport {
  std::size_t rows_read = 0;      // data rows encountered
  std::size_t rows_rejected = 0;  // malformed rows dropped
  std::vector<RejectedRow> rejected;
  std::vector<std::size_t> class_counts;
};

struct ParseOptions {
  // When >= 0, rows with no flag set get this label instead of Uncertain,
  // reproducing the fill-missing-with-3.0 preprocessing (adds a class).
  int fill_missing_label = -1;
};

struct ParseResult {
  Dataset dataset;
  IngestReport report;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
  while (end > begin &&
         (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r' ||
          s[end - 1] == '\n')) {
    --end;
  }
  return s.substr(begin, end - begin);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

inline bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc{} && result.ptr == end;
}

inline bool parse_flag(const std::string& field, bool& out) {
  std::string lower;
  lower.reserve(field.size());
  for (char c : field) lower.push_back(static_cast<char>(std::tolower(c)));
  if (lower == "true") {
    out = true;
    return true;
  }
  if (lower == "false") {
    out = false;
    return true;
  }
  double value = 0.0;
  if (!parse_double(field, value)) return false;
  if (value == 1.0) {
    out = true;
    return true;
  }
  if (value == 0.0) {
    out = false;
    return true;
  }
  return false;
}

inline std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace detail

// Reads a header CSV against the schema, derives a label per row, and
// drops malformed rows (unparseable numerics, non-finite values, short
// rows, duplicate ids), counting them in the report.
inline ParseResult parse_csv(const std::string& path,
                             const SchemaConfig& schema = {},
                             const ParseOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw EmptyInputError("empty input: '" + path + "' has no header row");
  }
  const std::vector<std::string> header = detail::split_fields(header_line);
  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header.size(); ++i) column_index[header[i]] = i;

  const auto lookup = [&](const std::string& name) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) {
      throw SchemaError("missing required column '" + name + "' in '" + path +
                        "'");
    }
    return it->second;
  };

  const std::size_t id_idx = lookup(schema.id_column);
  std::vector<std::size_t> feature_idx;
  feature_idx.reserve(schema.feature_columns.size());
  for (const std::string& name : schema.feature_columns) {
    feature_idx.push_back(lookup(name));
  }
  std::array<std::size_t, 3> flag_idx{};
  for (std::size_t f = 0; f < 3; ++f) flag_idx[f] = lookup(schema.flag_columns[f]);

  const ClassLabel missing_label =
      options.fill_missing_label >= 0 ? options.fill_missing_label : kUncertain;
  const int num_classes = options.fill_missing_label >= 0
                              ? std::max(kNumClasses, options.fill_missing_label + 1)
                              : kNumClasses;

  ParseResult result;
  result.dataset.feature_names = schema.feature_columns;
  result.report.class_counts.assign(static_cast<std::size_t>(num_classes), 0);

  std::unordered_set<long long> seen_ids;
  std::string line;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (detail::trim(line).empty()) continue;
    ++result.report.rows_read;

    const auto reject = [&](const std::string& reason) {
      ++result.report.rows_rejected;
      result.report.rejected.push_back({line_number, reason});
    };

    const std::vector<std::string> fields = detail::split_fields(line);
    if (fields.size() != header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, got " +
             std::to_string(fields.size()));
      continue;
    }

    RawRecord record;
    double id_value = 0.0;
    if (!detail::parse_double(fields[id_idx], id_value)) {
      reject("unparseable id '" + fields[id_idx] + "'");
      continue;
    }
    record.object_id = static_cast<long long>(id_value);
    if (!seen_ids.insert(record.object_id).second) {
      reject("duplicate object id " + std::to_string(record.object_id));
      continue;
    }

    bool ok = true;
    record.features.reserve(feature_idx.size());
    for (std::size_t j = 0; j < feature_idx.size(); ++j) {
      double value = 0.0;
      if (!detail::parse_double(fields[feature_idx[j]], value) ||
          !std::isfinite(value)) {
        reject("unparseable numeric in column '" + schema.feature_columns[j] +
               "'");
        ok = false;
        break;
      }
      record.features.push_back(value);
    }
    if (!ok) continue;

    for (std::size_t f = 0; f < 3; ++f) {
      bool flag = false;
      if (!detail::parse_flag(fields[flag_idx[f]], flag)) {
        reject("unparseable flag in column '" + schema.flag_columns[f] + "'");
        ok = false;
        break;
      }
      record.flags[f] = flag;
    }
    if (!ok) continue;

    const ClassLabel label = derive_label(record, missing_label);
    result.dataset.features.push_back(std::move(record.features));
    result.dataset.labels.push_back(label);
    if (static_cast<std::size_t>(label) >= result.report.class_counts.size()) {
      result.report.class_counts.resize(static_cast<std::size_t>(label) + 1, 0);
    }
    ++result.report.class_counts[static_cast<std::size_t>(label)];
  }

  if (result.report.rows_read == 0) {
    throw EmptyInputError("empty input: '" + path + "' has no data rows");
  }
  return result;
}

// Writes a dataset back out in the ingestion schema. Ids are sequential;
// the flag columns are reconstructed from the labels (labels outside
// {0,1,2} produce all-zero flags, the compat missing-label shape).
inline void write_csv(const Dataset& dataset, const std::string& path,
                      const SchemaConfig& schema = {}) {
  require(schema.feature_columns.size() == dataset.dim(),
          "write_csv: schema feature count does not match dataset");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");

  out << schema.id_column;
  for (const std::string& name : schema.feature_columns) out << ',' << name;
  for (const std::string& name : schema.flag_columns) out << ',' << name;
  out << '\n';

  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << i;
    for (double value : dataset.features[i]) {
      out << ',' << detail::format_double(value);
    }
    const ClassLabel label = dataset.labels[i];
    for (int f = 0; f < 3; ++f) out << ',' << (label == f ? 1 : 0);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_class_distribution_csv(const std::vector<std::size_t>& counts,
                                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "class,count\n";
  for (std::size_t c = 0; c < counts.size(); ++c) {
    out << c << ',' << counts[c] << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace galaxyml
