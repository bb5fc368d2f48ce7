#include "jacobi/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace jacobi {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorKind::MissingFeature, "column '" + name + "' not found");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

Vector CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto value = parse_number(rows[r][c]);
    if (!value) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lines[r]) + ", column '" + name +
                                             "': not a number: '" + rows[r][c] + "'");
    }
    v[static_cast<Eigen::Index>(r)] = *value;
  }
  return v;
}

Matrix CsvTable::numeric_columns(const std::vector<std::string>& names) const {
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = numeric_column(names[j]);
  return M;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (cells[j].empty()) {
          throw Error(ErrorKind::ParseError, source + ": line " + std::to_string(line_no) + ": empty header name");
        }
        if (std::find(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(j), cells[j]) !=
            cells.begin() + static_cast<std::ptrdiff_t>(j)) {
          throw Error(ErrorKind::ParseError,
                      source + ": line " + std::to_string(line_no) + ": duplicate column '" + cells[j] + "'");
        }
      }
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::ParseError, source + ": line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(table.header.size()) + " fields, found " +
                                             std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) {
        throw Error(ErrorKind::ParseError, source + ": line " + std::to_string(line_no) + ": missing value in column '" +
                                               table.header[j] + "'");
      }
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(line_no);
  }
  if (!have_header) throw Error(ErrorKind::ParseError, source + ": missing header row");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return read_csv(in, path);
}

Matrix design_from(const CsvTable& table, const std::vector<std::string>& feature_names) {
  Matrix X(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(feature_names.size()));
  for (std::size_t j = 0; j < feature_names.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    if (feature_names[j] == kInterceptName && !table.has_column(kInterceptName)) {
      X.col(col).setOnes();
    } else {
      X.col(col) = table.numeric_column(feature_names[j]);
    }
  }
  return X;
}

CsvDataset to_dataset(const CsvTable& table, const CsvSchema& schema) {
  if (schema.target.empty() && !schema.classes) {
    throw Error(ErrorKind::ConfigError, "a target or classes column is required");
  }
  if (table.rows.empty()) throw Error(ErrorKind::InsufficientData, "CSV has no data rows");

  std::vector<std::string> reserved;
  if (!schema.target.empty()) reserved.push_back(schema.target);
  if (schema.classes) reserved.push_back(*schema.classes);
  if (schema.disbursement) reserved.push_back(*schema.disbursement);
  for (const auto& name : reserved) table.column(name);

  std::vector<std::string> features;
  if (schema.intercept) features.push_back(kInterceptName);
  if (schema.features.empty()) {
    for (const auto& name : table.header)
      if (std::find(reserved.begin(), reserved.end(), name) == reserved.end()) features.push_back(name);
  } else {
    for (const auto& name : schema.features) features.push_back(name);
  }
  if (features.empty() || (schema.intercept && features.size() == 1)) {
    throw Error(ErrorKind::MissingFeature, "no feature columns");
  }

  CsvDataset out;
  out.data.X = design_from(table, features);
  out.data.feature_names = features;
  if (schema.disbursement) out.data.disbursement = table.numeric_column(*schema.disbursement);

  if (schema.classes) {
    const std::size_t c = table.column(*schema.classes);
    std::vector<std::string> labels;
    for (const auto& row : table.rows) labels.push_back(row[c]);
    std::sort(labels.begin(), labels.end(), [](const std::string& l, const std::string& r) {
      const auto nl = parse_number(l);
      const auto nr = parse_number(r);
      if (nl.has_value() != nr.has_value()) return nl.has_value();
      if (nl && *nl != *nr) return *nl < *nr;
      return l < r;
    });
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    if (labels.size() < 2) throw Error(ErrorKind::InvalidResponse, "classes column has fewer than two labels");
    std::map<std::string, int> index;
    for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = static_cast<int>(k);
    std::vector<int> y;
    for (const auto& row : table.rows) y.push_back(index.at(row[c]));
    out.data.counts = CountTable::from_labels(y, static_cast<int>(labels.size()));
    out.data.y = Eigen::Map<const Eigen::VectorXi>(y.data(), static_cast<Eigen::Index>(y.size())).cast<double>();
    out.class_labels = std::move(labels);
  } else {
    out.data.y = table.numeric_column(schema.target);
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", values(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace jacobi
