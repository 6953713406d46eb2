#include "oracles.hpp"
#include "robrsvd/ingest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace robrsvd;
using namespace robrsvd::io;
using oracle::Mat;
using oracle::Vec;

TEST(DenseCsv, MissingTokenMasksOneCell) {
  std::istringstream in("year,0,1\n1908,0.2,.\n1909,0.15,0.1\n");
  const ObservedMatrix<double> x = parse_dense_csv(in);
  EXPECT_EQ(x.missing_count(), 1);
  EXPECT_FALSE(x.observed(0, 1));
  EXPECT_DOUBLE_EQ(x.values()(1, 0), 0.15);
  EXPECT_DOUBLE_EQ(x.row_grid()[1], 1909);
  EXPECT_DOUBLE_EQ(x.col_grid()[1], 1);
}

TEST(DenseCsv, NonNumericLabelsFallBackToUnitGrid) {
  std::istringstream in("r,a,b,c\nx,1,2,3\ny,4,5,6\n");
  const ObservedMatrix<double> x = parse_dense_csv(in);
  EXPECT_DOUBLE_EQ(x.col_grid()[1], 0.5);
  EXPECT_DOUBLE_EQ(x.row_grid()[1], 1.0);
}

TEST(DenseCsv, ErrorsCarryLineNumbers) {
  std::istringstream ragged("r,a,b\n1,1,2\n2,3\n");
  try {
    parse_dense_csv(ragged);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
  }
  std::istringstream bad("r,a,b\n1,1,2\n2,x3,4\n");
  EXPECT_THROW(parse_dense_csv(bad), ParseError);
}

TEST(Triplet, PivotsAndMasksAbsentOrMissing) {
  std::istringstream in("Year,Age,Rate\n1908,0,0.2\n1908,1,0.1\n1909,0,0.15\n1909,1,.\n");
  const ObservedMatrix<double> x = parse_hmd_triplet(in);
  ASSERT_EQ(x.rows(), 2);
  ASSERT_EQ(x.cols(), 2);
  EXPECT_EQ(x.missing_count(), 1);
  EXPECT_FALSE(x.observed(1, 1));
  EXPECT_DOUBLE_EQ(x.values()(0, 1), 0.1);
  std::istringstream gap("1908,0,0.2\n1908,1,0.1\n1909,0,0.15\n");
  EXPECT_EQ(parse_hmd_triplet(gap).missing_count(), 1);
}

TEST(Triplet, HmdWhitespaceLayout) {
  std::istringstream in(
      "Spain, Death rates (period 1x1)\n\n"
      "  Year          Age             Female            Male           Total\n"
      "  1908           0             0.2               0.22            0.21\n"
      "  1908           1             0.1               0.12            0.11\n"
      "  1908         110+            .                 .               .\n"
      "  1909           0             0.15              0.17            0.16\n"
      "  1909           1             0.09              0.1             0.095\n"
      "  1909         110+            0.5               0.6             0.55\n");
  const ObservedMatrix<double> x = parse_hmd_triplet(in, ".", 4);
  ASSERT_EQ(x.cols(), 3);
  EXPECT_DOUBLE_EQ(x.col_grid()[2], 110);
  EXPECT_FALSE(x.observed(0, 2));
  EXPECT_DOUBLE_EQ(x.values()(1, 2), 0.55);
}

TEST(Triplet, DuplicateKeyNamesBothLines) {
  std::istringstream in("1,0,1\n1,1,2\n2,0,3\n1,0,4\n2,1,5\n");
  try {
    parse_hmd_triplet(in);
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  }
}

TEST(RoundTrip, BothFormatsBitIdentical) {
  std::mt19937_64 rng(101);
  Mask mask = Mask::Constant(7, 6, true);
  mask(2, 3) = mask(5, 0) = false;
  const ObservedMatrix<double> x(oracle::random_matrix(rng, 7, 6, 1e3), mask, oracle::random_grid(rng, 7),
                                 oracle::random_grid(rng, 6));
  const auto dir = std::filesystem::temp_directory_path() / "robrsvd_ingest_test";
  std::filesystem::create_directories(dir);
  for (MatrixFormat f : {MatrixFormat::dense_csv, MatrixFormat::hmd_triplet}) {
    MatrixFile file;
    file.path = dir / ("m_" + to_string(f) + ".csv");
    file.format = f;
    save(x, file);
    const ObservedMatrix<double> y = load(file);
    EXPECT_EQ(y.values(), x.values()) << to_string(f);
    EXPECT_TRUE((y.mask() == x.mask()).all());
    EXPECT_EQ(y.row_grid(), x.row_grid());
    EXPECT_EQ(y.col_grid(), x.col_grid());
  }
  const ObservedMatrix<double> z = from_json(nlohmann::json::parse(to_json(x).dump()));
  EXPECT_EQ(z.values(), x.values());
  EXPECT_TRUE(to_json(x)["values"][2][3].is_null());
  std::filesystem::remove_all(dir);
}

TEST(Load, MissingFileIsParseError) {
  MatrixFile f;
  f.path = "/nonexistent/robrsvd.csv";
  EXPECT_THROW(load(f), ParseError);
  EXPECT_THROW(parse_format("xlsx"), ContractViolation);
}

TEST(LogTransform, WorkedValuesAndMaskUntouched) {
  Mat v(2, 2);
  v << 0, 0.5, 3.5, -7;
  Mask mask = Mask::Constant(2, 2, true);
  mask(1, 1) = false;
  const ObservedMatrix<double> t = log_transform(ObservedMatrix<double>(v, mask));
  EXPECT_DOUBLE_EQ(t.values()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(t.values()(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(t.values()(1, 0), 2.0);
  EXPECT_FALSE(t.observed(1, 1));
  v(1, 1) = -1;
  try {
    log_transform(ObservedMatrix<double>(v));
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("(1, 1)"), std::string::npos);
  }
}

TEST(Energy, WorkedExamples) {
  const Vec e = energy_percentages(Mat(Eigen::Vector2d(3, 4).asDiagonal()), 2);
  EXPECT_NEAR(e[0], 64.0, 1e-12);
  EXPECT_NEAR(e[1], 36.0, 1e-12);
  const Mat r1 = Vec::LinSpaced(4, 1, 4) * Vec::LinSpaced(3, 1, 3).transpose();
  EXPECT_NEAR(energy_percentages(r1, 1)[0], 100.0, 1e-10);
  EXPECT_THROW(energy_percentages(Mat::Zero(3, 3), 1), NumericalError);
  EXPECT_THROW(energy_percentages(r1, 4), ContractViolation);
}

TEST(Energy, MatchesFullSvdAndIsScaleInvariant) {
  std::mt19937_64 rng(102);
  const Mat x = oracle::random_matrix(rng, 10, 6);
  const Vec e = energy_percentages(x, 6);
  Eigen::JacobiSVD<Mat> svd(x);
  const Vec expected = 100.0 * svd.singularValues().array().square() / x.squaredNorm();
  EXPECT_LT((e - expected).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(e.sum(), 100.0, 1e-9);
  for (int k = 1; k < 6; ++k) EXPECT_LE(e[k], e[k - 1]);
  EXPECT_LT((energy_percentages(Mat(-2.5 * x), 6) - e).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Labels, TrailingPlusStripped) {
  double v = 0;
  EXPECT_TRUE(parse_label("110+", v));
  EXPECT_EQ(v, 110);
  EXPECT_FALSE(parse_label("abc", v));
}
