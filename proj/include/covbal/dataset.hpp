#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covbal {

enum class Group : std::uint8_t { Control = 0, Treated = 1 };

// An N x d matrix of finite covariates (row-major, one row per subject) with a
// treated/control label per row. Immutable once constructed.
class Dataset {
 public:
  // Throws DataError on a size mismatch, a non-finite entry, or labels that
  // do not contain both groups. Empty column_names become x1..xd.
  Dataset(std::vector<double> values, std::size_t dim, std::vector<Group> labels,
          std::vector<std::string> column_names = {});

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t n_treated() const { return n_treated_; }
  std::size_t n_control() const { return size() - n_treated_; }

  double operator()(std::size_t row, std::size_t col) const {
    return values_[row * dim_ + col];
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const { return values_; }
  std::span<const Group> labels() const { return labels_; }
  const std::vector<std::string>& column_names() const { return column_names_; }

  // Same covariates, new labels.
  Dataset with_labels(std::vector<Group> labels) const;

 private:
  std::vector<double> values_;
  std::size_t dim_;
  std::vector<Group> labels_;
  std::vector<std::string> column_names_;
  std::size_t n_treated_ = 0;
};

// Reads a comma-separated file with a header row. The column named
// label_column holds the group; rows whose label equals treated_value are
// Treated, the (single) other value is Control. Every other column must parse
// as a finite real. Errors name the offending row (1-based, header excluded)
// and column.
Dataset read_csv(std::istream& in, std::string_view label_column,
                 std::string_view treated_value);
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column,
                 std::string_view treated_value);

// Writes values in shortest round-trip form, so read_csv(write_csv(d)) is
// bit-exact.
void write_csv(const Dataset& d, std::ostream& out, std::string_view label_column = "group",
               std::string_view treated_value = "T", std::string_view control_value = "C");

// The tests pair each treated subject with one control: requires
// n_treated == N/2 and N >= 4.
void validate_balanced_sizes(const Dataset& d);

// Splits one CSV record into fields; handles double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view line);

}  // namespace covbal
