#pragma once

#include "robrsvd/ingest.hpp"
#include "robrsvd/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace robrsvd::cli {

inline constexpr const char* kVersion = "1.0.0";

struct LambdaOptions {
  double lambda_min = 1e-6;
  double lambda_max = 1e4;
  int lambda_count = 20;
  /// Explicit grid; overrides min/max/count when nonempty.
  std::vector<double> lambdas;

  LambdaGrid<double> grid() const;
};

struct InputOptions {
  std::filesystem::path path;
  std::string format = "dense_csv";
  std::string missing_token = ".";
  int value_column = 2;
  int skip_lines = 0;

  io::MatrixFile file() const;
};

struct DecomposeConfig {
  InputOptions input;
  std::string method = "robrsvd";
  int rank = 1;
  double theta = kDefaultHuberTheta;
  /// Fixed scale; estimated by MAD from SVD residuals when empty.
  std::optional<double> sigma;
  LambdaOptions lambda;
  double tolerance = 1e-6;
  int max_iter = 100;
  int freeze_after = 5;
  std::string penalty = "natural-spline";
  std::string impute_init = "row";
  double impute_tol = 1e-6;
  int impute_max_rounds = 50;
  bool log2_half = false;
  int curve_points = 201;
  std::filesystem::path out = "robrsvd_out";
  std::string output_format = "csv";
};

struct SimulateConfig {
  std::vector<std::string> scenarios{"none", "outlying_cells", "outlying_rows", "outlying_block", "diagonal"};
  std::vector<double> sigma2{0.2, 0.5, 0.8, 1.0};
  std::vector<std::string> methods{"svd", "rsvd", "robrsvd"};
  int replications = 100;
  std::uint64_t seed = 1;
  int rank = 1;
  int rows = 100;
  int cols = 100;
  int missing = 0;
  double theta = kDefaultHuberTheta;
  LambdaOptions lambda;
  double tolerance = 1e-6;
  int max_iter = 100;
  int freeze_after = 5;
  double rank2_left_decay = 5.0;
  double rank2_right_frequency = 1.0;
  double rank2_ratio = 0.35;
  int threads = 1;
  std::filesystem::path out = "simulation_summary.csv";
  std::string output_format = "csv";
};

struct GcvTraceConfig {
  InputOptions input;
  /// Side whose penalty is traced: "v" (lambda_v | lambda_u) or "u".
  std::string side = "v";
  /// Penalty parameter of the other side, held fixed.
  double fixed_lambda = 0.0;
  double theta = kDefaultHuberTheta;
  std::optional<double> sigma;
  std::string method = "robrsvd";
  std::string penalty = "natural-spline";
  LambdaOptions lambda;
  std::filesystem::path out = "gcv_trace.csv";
};

struct TransformConfig {
  InputOptions input;
  bool log2_half = false;
  std::filesystem::path out = "transformed.csv";
  /// dense_csv, hmd_triplet or json.
  std::string output_format = "dense_csv";
};

/// Each command validates its configuration, writes its artifacts and a
/// manifest, and throws on any error.
void cmd_decompose(const DecomposeConfig& config);
void cmd_simulate(const SimulateConfig& config);
GcvTrace<double> cmd_gcv_trace(const GcvTraceConfig& config);
void cmd_transform(const TransformConfig& config);

/// Parses argv (subcommands decompose | simulate | gcv-trace | transform),
/// runs the command and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace robrsvd::cli
