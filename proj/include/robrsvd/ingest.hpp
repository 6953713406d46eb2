#pragma once

#include "robrsvd/observed_matrix.hpp"

#include "json.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace robrsvd::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MatrixFormat {
  /// Header row of column labels (first cell names the row labels), then one
  /// line per row: row label followed by the cells.
  dense_csv,
  /// One line per cell: row label, column label, value (HMD style, e.g.
  /// year, age, rate), pivoted into a matrix.
  hmd_triplet,
};

MatrixFormat parse_format(const std::string& name);
std::string to_string(MatrixFormat format);

struct MatrixFile {
  std::filesystem::path path;
  MatrixFormat format = MatrixFormat::dense_csv;
  std::string missing_token = ".";
  std::string row_label_name = "row";
  std::string col_label_name = "col";
  /// hmd_triplet: zero-based field holding the value (HMD Mx_1x1 "Total" is 4).
  int value_column = 2;
  /// hmd_triplet: lines to skip unconditionally. Leading lines whose first
  /// field is not numeric (titles, headers) are skipped anyway.
  int skip_lines = 0;
};

ObservedMatrix<double> parse_dense_csv(std::istream& in, const std::string& missing_token = ".");
ObservedMatrix<double> parse_hmd_triplet(std::istream& in, const std::string& missing_token = ".",
                                         int value_column = 2, int skip_lines = 0);
ObservedMatrix<double> load(const MatrixFile& file);

void write_dense_csv(std::ostream& out, const ObservedMatrix<double>& x,
                     const std::string& missing_token = ".", const std::string& row_label_name = "row");
void write_hmd_triplet(std::ostream& out, const ObservedMatrix<double>& x,
                       const std::string& missing_token = ".", const std::string& row_label_name = "row",
                       const std::string& col_label_name = "col");
void save(const ObservedMatrix<double>& x, const MatrixFile& file);

/// {"rows", "cols", "values" (null where masked), "mask", "row_grid", "col_grid"}.
nlohmann::json to_json(const ObservedMatrix<double>& x);
ObservedMatrix<double> from_json(const nlohmann::json& j);

/// x -> log2(x + 1/2) on observed cells.
ObservedMatrix<double> log_transform(const ObservedMatrix<double>& x);

/// 100 s_i^2 / |X|_F^2 for the leading k singular values of a complete matrix.
Vector<double> energy_percentages(const Matrix<double>& x, Eigen::Index k);

/// Parses a label as a number; a trailing '+' (e.g. "110+") is ignored.
bool parse_label(const std::string& text, double& out);

}  // namespace robrsvd::io
