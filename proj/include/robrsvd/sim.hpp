#pragma once

#include "robrsvd/decomposition.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace robrsvd::sim {

/// True leading singular value of the simulated signal.
inline constexpr double kTrueSingularValue = 773.0;

enum class Contamination { none, outlying_cells, outlying_rows, outlying_block, diagonal };

std::string to_string(Contamination c);
Contamination parse_contamination(const std::string& name);

/// Second pair of the rank-two generator. Shapes are Gram-Schmidt
/// orthogonalized against the first pair and normalized.
struct Rank2Config {
  /// Left shape exp(-left_decay * y).
  double left_decay = 5.0;
  /// Right shape cos(2 pi right_frequency z).
  double right_frequency = 1.0;
  /// s1 / s0.
  double singular_ratio = 0.35;
};

struct SimScenario {
  int rank = 1;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  double noise_variance = 1.0;
  Contamination contamination = Contamination::none;
  std::uint64_t seed = 0;
  Rank2Config rank2;
};

using Cell = std::pair<Eigen::Index, Eigen::Index>;

struct SimResult {
  double s0 = kTrueSingularValue;
  Vector<double> u0;
  Vector<double> v0;
  /// Second pair; zero-length unless rank == 2.
  double s1 = 0;
  Vector<double> u1;
  Vector<double> v1;
  /// Noise- and outlier-free signal matrix.
  Matrix<double> signal;
  ObservedMatrix<double> data;
  std::vector<Cell> contaminated_cells;

  Matrix<double> left_truth() const;
  Matrix<double> right_truth() const;
};

/// Builds the signal s0 u0 v0' (+ second pair), adds N(0, noise_variance)
/// noise and applies the contamination pattern. Noise and contamination use
/// independent streams of the seed, so the same seed with contamination
/// "none" gives the uncontaminated counterpart of any contaminated draw.
SimResult generate(const SimScenario& scenario);

/// Marks `count` distinct uniformly chosen cells missing.
SimResult mask_random(SimResult result, Eigen::Index count, std::uint64_t seed);

/// Euclidean distance after flipping est to the sign closest to truth.
double metric_l2(const Vector<double>& est, const Vector<double>& truth);
double metric_singular_value(double est, double truth = kTrueSingularValue);
/// Largest principal angle, in degrees, between the column spans.
double metric_principal_angle(const Matrix<double>& est_basis, const Matrix<double>& true_basis);
double metric_frobenius(const Matrix<double>& est, const Matrix<double>& truth);

/// Median and quartiles with linear interpolation between order statistics.
struct Quartiles {
  double q1;
  double median;
  double q3;
};
Quartiles quartiles(std::vector<double> values);

struct BenchmarkConfig {
  std::vector<Contamination> scenarios{Contamination::none};
  std::vector<double> noise_variances{1.0};
  std::vector<Method> methods{Method::svd, Method::rsvd, Method::robrsvd};
  int replications = 100;
  std::uint64_t seed = 1;
  int rank = 1;
  Eigen::Index rows = 100;
  Eigen::Index cols = 100;
  /// Cells deleted from every replication before fitting.
  Eigen::Index missing = 0;
  Rank2Config rank2;
  RobustLossSpec<double> loss;
  FitOptions<double> fit;
  ImputationOptions<double> imputation;
  /// Worker threads for replications; the output does not depend on it.
  int threads = 1;
};

struct SummaryRow {
  std::string scenario;
  std::string method;
  double sigma2;
  std::string metric;
  double median;
  double q1;
  double q3;
  int replications;
};

struct BenchmarkFailure {
  std::string scenario;
  std::string method;
  double sigma2;
  int replication;
  std::string message;
};

struct BenchmarkResult {
  std::vector<SummaryRow> rows;
  std::vector<BenchmarkFailure> failures;
  /// metric values per (row index in `rows`), in replication order.
  std::vector<std::vector<double>> samples;
};

/// Seed of replication `rep` of a scenario; independent of scheduling.
std::uint64_t replication_seed(std::uint64_t base, Contamination c, int rank, double sigma2, int rep);

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// Metric names reported for a given rank.
std::vector<std::string> metric_names(int rank);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_summary_json(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace robrsvd::sim
