#include "parity/data_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace parity {

namespace {

// RFC-style CSV: comma separated, optional double quotes with "" escapes.
// Returns one record per line; embedded newlines inside quotes are supported.
std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        fields.push_back(std::move(field));
        field.clear();
        records.push_back(std::move(fields));
        fields.clear();
        break;
      default:
        field.push_back(c);
    }
  }
  if (any && (!field.empty() || !fields.empty())) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

bool is_missing(const std::string& value) { return value.empty() || value == "?"; }

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      raise(ErrorCode::missing_column, name);
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);
  auto records = parse_csv(in);
  if (records.empty()) raise(ErrorCode::bad_format, path + " is empty");
  Table t;
  t.header = std::move(records.front());
  records.erase(records.begin());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].size() != t.header.size()) {
      std::ostringstream msg;
      msg << path << " line " << i + 2 << ": expected " << t.header.size()
          << " fields, got " << records[i].size();
      raise(ErrorCode::unparseable_row, msg.str());
    }
  }
  t.rows = std::move(records);
  return t;
}

double parse_double(const std::string& value, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    raise(ErrorCode::unparseable_row, context + ": not a number: '" + value + "'");
  }
}

struct ColumnIndices {
  std::size_t label;
  std::size_t group;
  std::vector<std::size_t> categorical;
  std::vector<std::size_t> numeric;
};

ColumnIndices resolve_columns(const Table& t, const DatasetSchema& schema) {
  ColumnIndices idx;
  idx.label = t.column(schema.label_column);
  idx.group = t.column(schema.group_column);
  for (const auto& c : schema.categorical_columns) idx.categorical.push_back(t.column(c));
  for (const auto& c : schema.numeric_columns) idx.numeric.push_back(t.column(c));
  return idx;
}

bool row_has_missing(const std::vector<std::string>& row, const ColumnIndices& idx) {
  if (is_missing(row[idx.label]) || is_missing(row[idx.group])) return true;
  for (std::size_t c : idx.categorical) {
    if (is_missing(row[c])) return true;
  }
  for (std::size_t c : idx.numeric) {
    if (is_missing(row[c])) return true;
  }
  return false;
}

LoadedDataset encode(const Table& t, const DatasetSchema& schema,
                     const Encoding* fitted) {
  const ColumnIndices idx = resolve_columns(t, schema);

  PreprocessReport report;
  report.rows_in = t.rows.size();

  std::vector<const std::vector<std::string>*> kept;
  kept.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (row_has_missing(row, idx)) {
      ++report.rows_dropped_missing;
    } else {
      kept.push_back(&row);
    }
  }
  report.rows_kept = kept.size();
  if (kept.empty()) {
    raise(ErrorCode::empty_after_filtering, "no rows left after dropping missing values");
  }

  Encoding encoding;
  if (fitted) {
    encoding = *fitted;
  } else {
    // Sorted vocabularies and numeric ranges from this (training) file only.
    for (std::size_t k = 0; k < idx.categorical.size(); ++k) {
      std::set<std::string> values;
      for (const auto* row : kept) values.insert((*row)[idx.categorical[k]]);
      encoding.vocabularies.emplace_back(
          schema.categorical_columns[k],
          std::vector<std::string>(values.begin(), values.end()));
    }
    for (std::size_t k = 0; k < idx.numeric.size(); ++k) {
      ColumnScaling sc{std::numeric_limits<double>::infinity(),
                       -std::numeric_limits<double>::infinity()};
      for (const auto* row : kept) {
        const double v = parse_double((*row)[idx.numeric[k]], schema.numeric_columns[k]);
        sc.min = std::min(sc.min, v);
        sc.max = std::max(sc.max, v);
      }
      encoding.scalings.emplace_back(schema.numeric_columns[k], sc);
    }
  }
  if (encoding.vocabularies.size() != schema.categorical_columns.size() ||
      encoding.scalings.size() != schema.numeric_columns.size()) {
    raise(ErrorCode::invalid_argument, "encoding does not match schema columns");
  }

  const std::size_t dim = encoding.feature_dimension();
  report.feature_dimension = dim;

  std::vector<double> features;
  features.reserve(kept.size() * dim);
  std::vector<std::uint8_t> labels, groups;
  labels.reserve(kept.size());
  groups.reserve(kept.size());

  for (const auto* row : kept) {
    labels.push_back((*row)[idx.label] == schema.positive_label_value ? 1 : 0);
    groups.push_back((*row)[idx.group] == schema.group_one_value ? 1 : 0);
    for (std::size_t k = 0; k < idx.categorical.size(); ++k) {
      const auto& vocab = encoding.vocabularies[k].second;
      const std::string& value = (*row)[idx.categorical[k]];
      const auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
      const bool found = it != vocab.end() && *it == value;
      if (!found) ++report.unseen_category_values;  // all-zeros block
      for (std::size_t v = 0; v < vocab.size(); ++v) {
        features.push_back(found && vocab[v] == value ? 1.0 : 0.0);
      }
    }
    for (std::size_t k = 0; k < idx.numeric.size(); ++k) {
      const auto& sc = encoding.scalings[k].second;
      double v = parse_double((*row)[idx.numeric[k]], schema.numeric_columns[k]);
      v = sc.max > sc.min ? (v - sc.min) / (sc.max - sc.min) : 0.0;
      features.push_back(std::clamp(v, 0.0, 1.0));
    }
  }

  report.encoding = std::move(encoding);
  return {GroupedDataset(std::move(features), dim, std::move(labels), std::move(groups)),
          std::move(report)};
}

}  // namespace

void DatasetSchema::validate() const {
  if (label_column.empty() || group_column.empty()) {
    raise(ErrorCode::invalid_argument, "label and group columns are required");
  }
  std::set<std::string> seen{label_column, group_column};
  if (seen.size() != 2) {
    raise(ErrorCode::invalid_argument, "label and group columns must differ");
  }
  for (const auto* cols : {&categorical_columns, &numeric_columns}) {
    for (const auto& c : *cols) {
      if (!seen.insert(c).second) {
        raise(ErrorCode::invalid_argument, "duplicate or label/group column in features: " + c);
      }
    }
  }
}

DatasetSchema DatasetSchema::from_json(const nlohmann::json& j) {
  DatasetSchema s;
  s.label_column = j.at("label_column").get<std::string>();
  s.group_column = j.at("group_column").get<std::string>();
  s.positive_label_value = j.at("positive_label_value").get<std::string>();
  s.group_one_value = j.at("group_one_value").get<std::string>();
  s.categorical_columns = j.value("categorical_columns", std::vector<std::string>{});
  s.numeric_columns = j.value("numeric_columns", std::vector<std::string>{});
  s.validate();
  return s;
}

nlohmann::json DatasetSchema::to_json() const {
  return {
      {"label_column", label_column},
      {"group_column", group_column},
      {"positive_label_value", positive_label_value},
      {"group_one_value", group_one_value},
      {"categorical_columns", categorical_columns},
      {"numeric_columns", numeric_columns},
  };
}

std::size_t Encoding::feature_dimension() const {
  std::size_t dim = scalings.size();
  for (const auto& [name, vocab] : vocabularies) dim += vocab.size();
  return dim;
}

nlohmann::json PreprocessReport::to_json() const {
  nlohmann::json categories = nlohmann::json::object();
  for (const auto& [name, vocab] : encoding.vocabularies) {
    categories[name] = vocab.size();
  }
  nlohmann::json ranges = nlohmann::json::object();
  for (const auto& [name, sc] : encoding.scalings) {
    ranges[name] = {{"min", sc.min}, {"max", sc.max}};
  }
  return {
      {"rows_in", rows_in},
      {"rows_kept", rows_kept},
      {"rows_dropped_missing", rows_dropped_missing},
      {"unseen_category_values", unseen_category_values},
      {"feature_dimension", feature_dimension},
      {"category_counts", std::move(categories)},
      {"numeric_ranges", std::move(ranges)},
  };
}

LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema) {
  schema.validate();
  return encode(read_table(path), schema, nullptr);
}

LoadedDataset load_csv(const std::string& path, const DatasetSchema& schema,
                       const Encoding& encoding) {
  schema.validate();
  return encode(read_table(path), schema, &encoding);
}

FinitePopulation load_population(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + path);

  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<FinitePopulation::Entry> entries;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::istringstream fields(text);
    if (!have_n) {
      long long parsed = -1;
      fields >> parsed;
      std::string rest;
      if (!fields || (fields >> rest) || parsed <= 0) {
        std::ostringstream msg;
        msg << path << " line " << line_no << ": expected a positive outcome count";
        raise(ErrorCode::bad_format, msg.str());
      }
      n = static_cast<std::size_t>(parsed);
      have_n = true;
      continue;
    }
    long long x = -1;
    int y = -1, a = -1;
    double mass = -1.0;
    fields >> x >> y >> a >> mass;
    std::string rest;
    if (!fields || (fields >> rest)) {
      std::ostringstream msg;
      msg << path << " line " << line_no << ": expected 'x y a mass'";
      raise(ErrorCode::bad_format, msg.str());
    }
    if (x < 0 || static_cast<std::size_t>(x) >= n || y < 0 || y > 1 || a < 0 || a > 1) {
      std::ostringstream msg;
      msg << path << " line " << line_no << ": index out of range";
      raise(ErrorCode::index_out_of_range, msg.str());
    }
    entries.push_back({static_cast<std::size_t>(x), y, a, mass});
  }
  if (!have_n) raise(ErrorCode::bad_format, path + " has no header line");
  return FinitePopulation::from_entries(n, entries);
}

void save_population(const FinitePopulation& pop, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open " + path);
  out << pop.size() << "\n";
  char buf[64];
  for (std::size_t x = 0; x < pop.size(); ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int a = 0; a < 2; ++a) {
        const double m = pop.mass(x, y, a);
        if (m == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%zu %d %d %.17g\n", x, y, a, m);
        out << buf;
      }
    }
  }
  if (!out) raise(ErrorCode::io_error, "failed writing " + path);
}

namespace {

void dump_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
    return;
  }
  if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
    return;
  }
  if (v == 0.0) {
    out += "0";  // normalizes -0
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  out += buf;
}

void dump_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_value(std::string& out, const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      out += j.dump();
      break;
    case nlohmann::json::value_t::number_float:
      dump_number(out, j.get<double>());
      break;
    case nlohmann::json::value_t::string:
      dump_string(out, j.get<std::string>());
      break;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_value(out, item);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::object: {
      // nlohmann's default object container is a std::map, already sorted.
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        dump_string(out, it.key());
        out += ':';
        dump_value(out, it.value());
      }
      out += '}';
      break;
    }
    default:
      raise(ErrorCode::invalid_argument, "unsupported json value");
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  std::string out;
  dump_value(out, j);
  out += '\n';
  return out;
}

void write_report(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open " + path);
  out << canonical_dump(j);
  if (!out) raise(ErrorCode::io_error, "failed writing " + path);
}

DatasetSchema adult_schema() {
  DatasetSchema s;
  s.label_column = "income";
  s.group_column = "sex";
  s.positive_label_value = ">50K";
  s.group_one_value = "Female";
  s.categorical_columns = {"workclass",    "education",  "marital_status",
                           "occupation",   "relationship", "race",
                           "native_country"};
  s.numeric_columns = {"age",          "fnlwgt",       "education_num",
                       "capital_gain", "capital_loss", "hours_per_week"};
  return s;
}

void convert_adult_raw(const std::string& raw_path, const std::string& out_path) {
  std::ifstream in(raw_path);
  if (!in) raise(ErrorCode::io_error, "cannot open " + raw_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) raise(ErrorCode::io_error, "cannot open " + out_path);

  out << "age,workclass,fnlwgt,education,education_num,marital_status,occupation,"
         "relationship,race,sex,capital_gain,capital_loss,hours_per_week,"
         "native_country,income\n";

  std::string line;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty() || text.front() == '|') continue;  // test-file banner line
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(text);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 15) continue;  // truncated trailing record
    // Test-split labels carry a trailing period.
    std::string& label = fields.back();
    if (!label.empty() && label.back() == '.') label.pop_back();
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  }
  if (!out) raise(ErrorCode::io_error, "failed writing " + out_path);
}

}  // namespace parity
