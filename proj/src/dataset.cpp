#include "covbal/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "covbal/error.hpp"

namespace covbal {

Dataset::Dataset(std::vector<double> values, std::size_t dim, std::vector<Group> labels,
                 std::vector<std::string> column_names)
    : values_(std::move(values)), dim_(dim), labels_(std::move(labels)),
      column_names_(std::move(column_names)) {
  if (dim_ == 0) throw DataError("dataset needs at least one covariate");
  if (values_.size() != labels_.size() * dim_) {
    throw DataError("dataset: " + std::to_string(values_.size()) + " values do not fill " +
                    std::to_string(labels_.size()) + " rows of " + std::to_string(dim_));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("dataset: non-finite value at row " + std::to_string(i / dim_ + 1) +
                      ", column " + std::to_string(i % dim_ + 1));
    }
  }
  if (column_names_.empty()) {
    for (std::size_t j = 0; j < dim_; ++j) column_names_.push_back("x" + std::to_string(j + 1));
  } else if (column_names_.size() != dim_) {
    throw DataError("dataset: column name count does not match dimension");
  }
  n_treated_ = static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), Group::Treated));
  if (n_treated_ == 0 || n_treated_ == labels_.size()) {
    throw DataError("dataset: labels must contain both treated and control subjects");
  }
}

Dataset Dataset::with_labels(std::vector<Group> labels) const {
  if (labels.size() != labels_.size()) throw DataError("with_labels: label count mismatch");
  return Dataset(values_, dim_, std::move(labels), column_names_);
}

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.push_back(std::move(field));
  for (auto& f : fields) {
    const auto first = f.find_first_not_of(" \t\r");
    const auto last = f.find_last_not_of(" \t\r");
    f = first == std::string::npos ? std::string() : f.substr(first, last - first + 1);
  }
  return fields;
}

namespace {

bool parse_finite(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset read_csv(std::istream& in, std::string_view label_column, std::string_view treated_value) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty input, header row expected");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const std::vector<std::string> header = split_csv_record(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DataError("csv: label column '" + std::string(label_column) + "' not found");
  }
  const std::size_t label_index = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_index) names.push_back(header[j]);
  }
  if (names.empty()) throw DataError("csv: no covariate columns");

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_record(line);
    if (fields.size() != header.size()) {
      throw DataError("csv: row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_index) {
        raw_labels.push_back(fields[j]);
        continue;
      }
      double v = 0.0;
      if (!parse_finite(fields[j], v)) {
        throw DataError("csv: row " + std::to_string(row) + ", column '" + header[j] +
                        "': expected a finite number, got '" + fields[j] + "'");
      }
      values.push_back(v);
    }
  }

  std::vector<std::string> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 2) {
    throw DataError("csv: non-binary label: column '" + std::string(label_column) + "' has " +
                    std::to_string(distinct.size()) + " distinct values");
  }

  std::vector<Group> labels;
  labels.reserve(raw_labels.size());
  std::size_t treated = 0;
  for (const auto& l : raw_labels) {
    const bool t = l == treated_value;
    treated += t;
    labels.push_back(t ? Group::Treated : Group::Control);
  }
  if (treated < 2 || labels.size() - treated < 2) {
    throw DataError("csv: need at least 2 rows per group, found " + std::to_string(treated) +
                    " treated ('" + std::string(treated_value) + "') and " +
                    std::to_string(labels.size() - treated) + " control");
  }
  const std::size_t dim = names.size();
  return Dataset(std::move(values), dim, std::move(labels), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column,
                 std::string_view treated_value) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_csv(in, label_column, treated_value);
}

namespace {

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_csv(const Dataset& d, std::ostream& out, std::string_view label_column,
               std::string_view treated_value, std::string_view control_value) {
  for (const auto& name : d.column_names()) {
    write_field(out, name);
    out << ',';
  }
  write_field(out, label_column);
  out << '\n';
  char buf[64];
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (double v : d.row(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    write_field(out, d.labels()[i] == Group::Treated ? treated_value : control_value);
    out << '\n';
  }
}

void validate_balanced_sizes(const Dataset& d) {
  if (d.size() < 4) {
    throw DataError("need N >= 4 subjects, got " + std::to_string(d.size()));
  }
  if (2 * d.n_treated() != d.size()) {
    throw DataError("unequal group sizes: " + std::to_string(d.n_treated()) + " treated vs " +
                    std::to_string(d.n_control()) + " control; matched pairs required");
  }
}

}  // namespace covbal
