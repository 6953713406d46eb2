#include "robrsvd/ingest.hpp"

#include "robrsvd/format.hpp"
#include "robrsvd/svd.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace robrsvd::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> split_fields(const std::string& line) {
  if (line.find(',') != std::string::npos) return split_csv(line);
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string field;
  while (ss >> field) fields.push_back(field);
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && begin != end;
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

/// Numeric strictly increasing labels become the grid; anything else falls
/// back to equally spaced points on [0, 1].
Vector<double> grid_from_labels(const std::vector<std::string>& labels) {
  Vector<double> grid(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!parse_label(labels[i], grid[static_cast<Eigen::Index>(i)]))
      return unit_grid(static_cast<Eigen::Index>(labels.size()));
  if (!strictly_increasing(grid)) return unit_grid(grid.size());
  return grid;
}

}  // namespace

MatrixFormat parse_format(const std::string& name) {
  if (name == "dense_csv" || name == "csv") return MatrixFormat::dense_csv;
  if (name == "hmd_triplet" || name == "triplet") return MatrixFormat::hmd_triplet;
  throw ContractViolation("unknown matrix format '" + name + "' (expected dense_csv or hmd_triplet)");
}

std::string to_string(MatrixFormat format) {
  return format == MatrixFormat::dense_csv ? "dense_csv" : "hmd_triplet";
}

bool parse_label(const std::string& text, double& out) {
  std::string t = trim(text);
  if (!t.empty() && t.back() == '+') t.pop_back();
  return parse_number(t, out);
}

ObservedMatrix<double> parse_dense_csv(std::istream& in, const std::string& missing_token) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.size() < 2) throw ParseError("dense CSV: missing header row with column labels");
  const std::vector<std::string> col_labels(header.begin() + 1, header.end());
  const std::size_t n = col_labels.size();

  std::vector<std::string> row_labels;
  std::vector<double> values;
  std::vector<bool> observed;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != n + 1)
      fail(line_no, "expected " + std::to_string(n + 1) + " fields, found " + std::to_string(fields.size()));
    row_labels.push_back(fields[0]);
    for (std::size_t j = 1; j <= n; ++j) {
      double v = 0;
      if (fields[j] == missing_token) {
        values.push_back(0.0);
        observed.push_back(false);
      } else if (parse_number(fields[j], v)) {
        values.push_back(v);
        observed.push_back(true);
      } else {
        fail(line_no, "cannot parse '" + fields[j] + "' as a number (column " + std::to_string(j) + ")");
      }
    }
  }
  const auto m = static_cast<Eigen::Index>(row_labels.size());
  if (m < 2 || n < 2) throw ParseError("dense CSV: need at least 2 rows and 2 columns");
  Matrix<double> x(m, static_cast<Eigen::Index>(n));
  Mask mask(m, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      const auto k = static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j);
      x(i, j) = values[k];
      mask(i, j) = observed[k];
    }
  return ObservedMatrix<double>(std::move(x), std::move(mask), grid_from_labels(row_labels),
                                grid_from_labels(col_labels));
}

ObservedMatrix<double> parse_hmd_triplet(std::istream& in, const std::string& missing_token,
                                         int value_column, int skip_lines) {
  require(value_column >= 2, "value column must come after the row and column labels");
  struct Entry {
    double value;
    bool observed;
  };
  std::map<std::pair<double, double>, Entry> cells;
  std::map<std::pair<double, double>, int> first_line;
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no <= skip_lines) continue;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    double row = 0, col = 0;
    if (fields.empty() || !parse_label(fields[0], row)) {
      if (!seen_data) continue;  // title or header lines
      fail(line_no, "cannot parse row label '" + (fields.empty() ? std::string() : fields[0]) + "'");
    }
    seen_data = true;
    if (fields.size() <= static_cast<std::size_t>(value_column))
      fail(line_no, "expected at least " + std::to_string(value_column + 1) + " fields, found " +
                        std::to_string(fields.size()));
    if (!parse_label(fields[1], col)) fail(line_no, "cannot parse column label '" + fields[1] + "'");
    const std::string& text = fields[static_cast<std::size_t>(value_column)];
    Entry e{0.0, false};
    if (text != missing_token) {
      if (!parse_number(text, e.value)) fail(line_no, "cannot parse '" + text + "' as a number");
      e.observed = true;
    }
    const auto key = std::make_pair(row, col);
    if (auto it = first_line.find(key); it != first_line.end())
      fail(line_no, "duplicate entry for (" + fields[0] + ", " + fields[1] + "), first seen on line " +
                        std::to_string(it->second));
    first_line.emplace(key, line_no);
    cells.emplace(key, e);
  }
  std::vector<double> rows, cols;
  for (const auto& [key, e] : cells) {
    rows.push_back(key.first);
    cols.push_back(key.second);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  const auto m = static_cast<Eigen::Index>(rows.size()), n = static_cast<Eigen::Index>(cols.size());
  if (m < 2 || n < 2) throw ParseError("triplet file: need at least 2 distinct rows and 2 distinct columns");
  Matrix<double> x = Matrix<double>::Zero(m, n);
  Mask mask = Mask::Constant(m, n, false);
  for (const auto& [key, e] : cells) {
    const auto i = std::lower_bound(rows.begin(), rows.end(), key.first) - rows.begin();
    const auto j = std::lower_bound(cols.begin(), cols.end(), key.second) - cols.begin();
    x(i, j) = e.value;
    mask(i, j) = e.observed;
  }
  return ObservedMatrix<double>(std::move(x), std::move(mask),
                                Eigen::Map<const Vector<double>>(rows.data(), m),
                                Eigen::Map<const Vector<double>>(cols.data(), n));
}

ObservedMatrix<double> load(const MatrixFile& file) {
  std::ifstream in(file.path);
  if (!in) throw ParseError("cannot open '" + file.path.string() + "'");
  try {
    if (file.format == MatrixFormat::dense_csv) return parse_dense_csv(in, file.missing_token);
    return parse_hmd_triplet(in, file.missing_token, file.value_column, file.skip_lines);
  } catch (const ParseError& e) {
    throw ParseError(file.path.string() + ": " + e.what());
  }
}

void write_dense_csv(std::ostream& out, const ObservedMatrix<double>& x, const std::string& missing_token,
                     const std::string& row_label_name) {
  out << row_label_name;
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ',' << format_shortest(x.col_grid()[j]);
  out << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out << format_shortest(x.row_grid()[i]);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out << ',' << (x.observed(i, j) ? format_csv(x.values()(i, j)) : missing_token);
    out << '\n';
  }
}

void write_hmd_triplet(std::ostream& out, const ObservedMatrix<double>& x, const std::string& missing_token,
                       const std::string& row_label_name, const std::string& col_label_name) {
  out << row_label_name << ',' << col_label_name << ",value\n";
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out << format_shortest(x.row_grid()[i]) << ',' << format_shortest(x.col_grid()[j]) << ','
          << (x.observed(i, j) ? format_csv(x.values()(i, j)) : missing_token) << '\n';
}

void save(const ObservedMatrix<double>& x, const MatrixFile& file) {
  std::ofstream out(file.path);
  if (!out) throw ParseError("cannot write '" + file.path.string() + "'");
  if (file.format == MatrixFormat::dense_csv)
    write_dense_csv(out, x, file.missing_token, file.row_label_name);
  else
    write_hmd_triplet(out, x, file.missing_token, file.row_label_name, file.col_label_name);
}

nlohmann::json to_json(const ObservedMatrix<double>& x) {
  nlohmann::json values = nlohmann::json::array(), mask = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    nlohmann::json vr = nlohmann::json::array(), mr = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      vr.push_back(x.observed(i, j) ? nlohmann::json(x.values()(i, j)) : nlohmann::json(nullptr));
      mr.push_back(x.observed(i, j));
    }
    values.push_back(std::move(vr));
    mask.push_back(std::move(mr));
  }
  return {{"rows", x.rows()},
          {"cols", x.cols()},
          {"values", std::move(values)},
          {"mask", std::move(mask)},
          {"row_grid", std::vector<double>(x.row_grid().data(), x.row_grid().data() + x.rows())},
          {"col_grid", std::vector<double>(x.col_grid().data(), x.col_grid().data() + x.cols())}};
}

ObservedMatrix<double> from_json(const nlohmann::json& j) {
  const auto m = j.at("rows").get<Eigen::Index>(), n = j.at("cols").get<Eigen::Index>();
  Matrix<double> x(m, n);
  Mask mask(m, n);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      mask(r, c) = j.at("mask").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<bool>();
      const auto& v = j.at("values").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
      x(r, c) = mask(r, c) ? v.get<double>() : 0.0;
    }
  const auto rg = j.at("row_grid").get<std::vector<double>>();
  const auto cg = j.at("col_grid").get<std::vector<double>>();
  return ObservedMatrix<double>(std::move(x), std::move(mask),
                                Eigen::Map<const Vector<double>>(rg.data(), static_cast<Eigen::Index>(rg.size())),
                                Eigen::Map<const Vector<double>>(cg.data(), static_cast<Eigen::Index>(cg.size())));
}

ObservedMatrix<double> log_transform(const ObservedMatrix<double>& x) {
  Matrix<double> out = x.values();
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (!x.observed(i, j)) continue;
      const double v = x.values()(i, j);
      if (v < 0.0)
        throw ContractViolation("log transform: negative value " + format_shortest(v) + " at cell (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
      out(i, j) = std::log2(v + 0.5);
    }
  return x.with_values(std::move(out));
}

Vector<double> energy_percentages(const Matrix<double>& x, Eigen::Index k) {
  require(k >= 1 && k <= std::min(x.rows(), x.cols()), "energy: k must lie in [1, min(m, n)]");
  const double total = x.squaredNorm();
  if (!(total > 0.0)) throw NumericalError("energy percentages of a zero matrix are undefined");
  const Vector<double> s = singular_values(x);
  return (100.0 * s.head(k).array().square() / total).matrix();
}

}  // namespace robrsvd::io
