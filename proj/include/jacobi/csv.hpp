#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jacobi/dataset.hpp"

namespace jacobi {

/// Raw comma-separated table. Cells are kept as text until a column is
/// selected; `line_of(r)` gives the 1-based file line of data row r.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  std::size_t column(const std::string& name) const;  // MissingFeature if absent
  bool has_column(const std::string& name) const;
  Vector numeric_column(const std::string& name) const;
  Matrix numeric_columns(const std::vector<std::string>& names) const;
};

/// Header required; empty cells and ragged rows are ParseError with the line number.
CsvTable read_csv(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv_file(const std::string& path);

struct CsvSchema {
  std::string target;                       // response column, or empty with `classes`
  std::optional<std::string> classes;       // multiclass label column
  std::optional<std::string> disbursement;  // loan amount V
  std::vector<std::string> features;        // empty: every other column
  bool intercept = false;                   // prepend a column of ones named "(intercept)"
};

inline constexpr const char* kInterceptName = "(intercept)";

/// Builds a dataset by column name. Multiclass labels are mapped to indices
/// in sorted order (numeric labels sort numerically) and stored in
/// `class_labels`; the count table is one-hot.
struct CsvDataset {
  Dataset data;
  std::vector<std::string> class_labels;
};

CsvDataset to_dataset(const CsvTable& table, const CsvSchema& schema);

/// Design matrix for named features; the intercept name yields ones.
Matrix design_from(const CsvTable& table, const std::vector<std::string>& feature_names);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);

}  // namespace jacobi
