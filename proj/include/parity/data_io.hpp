#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parity/dataset.hpp"
#include "parity/population.hpp"

namespace parity {

// Declares how a CSV maps onto (features, label, group). Label and group
// columns are excluded from the feature columns by construction.
struct DatasetSchema {
  std::string label_column;
  std::string group_column;
  std::string positive_label_value;
  std::string group_one_value;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> numeric_columns;

  void validate() const;
  static DatasetSchema from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ColumnScaling {
  double min = 0.0;
  double max = 1.0;
};

// Fitted preprocessing state: one-hot vocabularies (sorted) per categorical
// column and min-max ranges per numeric column, both from the training file.
struct Encoding {
  std::vector<std::pair<std::string, std::vector<std::string>>> vocabularies;
  std::vector<std::pair<std::string, ColumnScaling>> scalings;

  std::size_t feature_dimension() const;
};

struct PreprocessReport {
  std::size_t rows_in = 0;
  std::size_t rows_kept = 0;
  std::size_t rows_dropped_missing = 0;
  std::size_t unseen_category_values = 0;  // test-time values outside the vocabulary
  std::size_t feature_dimension = 0;
  Encoding encoding;

  nlohmann::json to_json() const;
};

struct LoadedDataset {
  GroupedDataset data;
  PreprocessReport report;
};

// Fits the encoding on this file: categorical columns one-hot with sorted
// vocabularies, numeric columns min-max scaled to [0,1]. Rows with missing
// values ("?" or empty) are dropped and counted.
LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema);

// Encodes with a previously fitted encoding (test files). Unseen categories
// become all-zero blocks and are counted; numeric values are clamped to the
// training range.
LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema,
                       const Encoding& encoding);

// Population text format: first line `n`, then `x y a mass` per line.
// Repeated (x,y,a) entries accumulate.
FinitePopulation load_population(const std::string& path);
void save_population(const FinitePopulation& pop, const std::string& path);

// Canonical JSON: keys sorted, floats at 6 significant digits, non-finite
// values emitted as strings. Byte-stable across runs for equal inputs.
std::string canonical_dump(const nlohmann::json& j);
void write_report(const nlohmann::json& j, const std::string& path);

// The census income benchmark: canonical schema plus a converter from the raw
// distribution files (no header, ", " separators, test labels with a trailing
// period) to the clean headered CSV this toolkit reads.
DatasetSchema adult_schema();
void convert_adult_raw(const std::string& raw_path, const std::string& out_path);

}  // namespace parity
