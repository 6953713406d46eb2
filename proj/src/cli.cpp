#include "robrsvd/cli.hpp"

#include "robrsvd/format.hpp"
#include "robrsvd/robrsvd.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace robrsvd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

LambdaGrid<double> LambdaOptions::grid() const {
  if (!lambdas.empty()) return LambdaGrid<double>(lambdas);
  return LambdaGrid<double>::log_spaced(lambda_min, lambda_max, lambda_count);
}

io::MatrixFile InputOptions::file() const {
  io::MatrixFile f;
  f.path = path;
  f.format = io::parse_format(format);
  f.missing_token = missing_token;
  f.value_column = value_column;
  f.skip_lines = skip_lines;
  return f;
}

namespace {

json lambda_json(const LambdaOptions& l) {
  return {{"lambda_min", l.lambda_min}, {"lambda_max", l.lambda_max}, {"lambda_count", l.lambda_count},
          {"lambdas", l.lambdas}};
}

json input_json(const InputOptions& in) {
  return {{"path", in.path.string()}, {"format", in.format}, {"missing_token", in.missing_token},
          {"value_column", in.value_column}, {"skip_lines", in.skip_lines}};
}

json provenance() {
  return {{"tool", "robrsvd"},
          {"version", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  write_text(path, ss.str());
}

void write_manifest(const fs::path& path, const std::string& command, json config) {
  json manifest = provenance();
  manifest["command"] = command;
  manifest["config"] = std::move(config);
  write_text(path, manifest.dump(2) + "\n");
}

void validate_lambda(const LambdaOptions& l) {
  if (l.lambdas.empty()) {
    require(l.lambda_min > 0 && l.lambda_max >= l.lambda_min,
            "--lambda-min must be positive and not exceed --lambda-max");
    require(l.lambda_count >= 1, "--lambda-count must be at least 1");
  }
  (void)l.grid();
}

FitOptions<double> fit_options(const LambdaOptions& l, double tol, int max_iter, int freeze_after,
                               const std::string& penalty) {
  FitOptions<double> o;
  o.lambda_u_grid = l.grid();
  o.lambda_v_grid = l.grid();
  o.tolerance = tol;
  o.max_iterations = max_iter;
  o.freeze_lambda_after = freeze_after;
  o.penalty = parse_penalty_kind(penalty);
  return o;
}

RobustLossSpec<double> loss_spec(double theta, const std::optional<double>& sigma) {
  require(theta > 0, "--theta must be positive (use inf for the squared loss)");
  RobustLossSpec<double> loss;
  loss.theta = theta;
  if (sigma) {
    require(*sigma > 0, "--sigma must be positive");
    loss.sigma = *sigma;
    loss.sigma_source = SigmaSource::fixed;
  }
  return loss;
}

void write_vector_csv(std::ostream& out, const Vector<double>& grid, const Vector<double>& values,
                      const char* name) {
  out << "grid," << name << '\n';
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    out << io::format_csv(grid[i]) << ',' << io::format_csv(values[i]) << '\n';
}

json vector_json(const Vector<double>& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json trace_json(const GcvTrace<double>& t) {
  json arr = json::array();
  for (const auto& r : t.records)
    arr.push_back({{"lambda", r.lambda}, {"gcv", r.gcv}, {"hat_trace", r.hat_trace}, {"chosen", r.chosen}});
  return arr;
}

}  // namespace

void cmd_decompose(const DecomposeConfig& c) {
  const Method method = parse_method(c.method);
  require(c.rank >= 1, "--rank must be at least 1");
  require(c.tolerance > 0, "--tolerance must be positive");
  require(c.max_iter >= 1, "--max-iter must be at least 1");
  require(c.freeze_after >= 0, "--freeze-after must be nonnegative");
  require(c.impute_init == "row" || c.impute_init == "column", "--impute-init must be row or column");
  require(c.impute_tol > 0 && c.impute_max_rounds >= 1, "invalid imputation tolerance or round limit");
  require(c.curve_points >= 2, "--curve-points must be at least 2");
  require(c.output_format == "csv" || c.output_format == "json", "--output-format must be csv or json");
  validate_lambda(c.lambda);
  const RobustLossSpec<double> loss = loss_spec(c.theta, c.sigma);
  const FitOptions<double> opts = fit_options(c.lambda, c.tolerance, c.max_iter, c.freeze_after, c.penalty);
  ImputationOptions<double> iopts;
  iopts.init = c.impute_init == "row" ? ImputationInit::row_mean : ImputationInit::column_mean;
  iopts.relative_tolerance = c.impute_tol;
  iopts.max_rounds = c.impute_max_rounds;

  ObservedMatrix<double> x = io::load(c.input.file());
  if (c.log2_half) x = io::log_transform(x);
  require(c.rank <= std::min(x.rows(), x.cols()), "--rank exceeds min(rows, cols) of the input");

  const Decomposition<double> d = fit(x, method, c.rank, loss, opts, iopts);
  const Matrix<double> filled = impute(x, d);
  const Vector<double> energy = io::energy_percentages(filled, std::min(x.rows(), x.cols()));
  const ObservedMatrix<double> residual = x.with_values(d.residual.residuals);
  const ObservedMatrix<double> reconstruction(d.reconstruction(), Mask::Constant(x.rows(), x.cols(), true),
                                              x.row_grid(), x.col_grid());

  fs::create_directories(c.out);
  json config{{"input", input_json(c.input)}, {"method", c.method}, {"rank", c.rank},
              {"theta", std::isinf(c.theta) ? json("inf") : json(c.theta)},
              {"sigma", c.sigma ? json(*c.sigma) : json("mad")}, {"lambda", lambda_json(c.lambda)},
              {"tolerance", c.tolerance}, {"max_iter", c.max_iter}, {"freeze_after", c.freeze_after},
              {"penalty", c.penalty}, {"impute_init", c.impute_init}, {"impute_tol", c.impute_tol},
              {"impute_max_rounds", c.impute_max_rounds}, {"log2_half", c.log2_half},
              {"curve_points", c.curve_points}, {"out", c.out.string()}, {"output_format", c.output_format}};
  write_manifest(c.out / "manifest.json", "decompose", config);

  if (c.output_format == "json") {
    json comps = json::array();
    for (std::size_t k = 0; k < d.components.size(); ++k) {
      const auto& p = d.components[k];
      const auto& st = d.imputation[k];
      comps.push_back({{"component", k + 1}, {"s", p.s}, {"u", vector_json(p.u)}, {"v", vector_json(p.v)},
                       {"lambda_u", p.lambda_u}, {"lambda_v", p.lambda_v}, {"iterations", p.iterations},
                       {"converged", p.converged}, {"final_objective", p.final_objective},
                       {"sigma", p.sigma}, {"lambda_frozen", p.lambda_frozen},
                       {"imputation_rounds", st.round}, {"imputation_converged", st.converged},
                       {"gcv_u", trace_json(p.gcv_u)}, {"gcv_v", trace_json(p.gcv_v)}});
    }
    json doc{{"method", c.method}, {"row_grid", vector_json(x.row_grid())},
             {"col_grid", vector_json(x.col_grid())}, {"components", comps},
             {"energy_percentages", vector_json(energy)}, {"residual", io::to_json(residual)},
             {"reconstruction", io::to_json(reconstruction)}};
    write_text(c.out / "decomposition.json", doc.dump(2) + "\n");
    return;
  }

  write_file(c.out / "components.csv", [&](std::ostream& o) {
    o << "component,s,lambda_u,lambda_v,iterations,converged,final_objective,sigma,imputation_rounds,"
         "imputation_converged\n";
    for (std::size_t k = 0; k < d.components.size(); ++k) {
      const auto& p = d.components[k];
      const auto& st = d.imputation[k];
      o << k + 1 << ',' << io::format_csv(p.s) << ',' << io::format_csv(p.lambda_u) << ','
        << io::format_csv(p.lambda_v) << ',' << p.iterations << ',' << (p.converged ? 1 : 0) << ','
        << io::format_csv(p.final_objective) << ',' << io::format_csv(p.sigma) << ',' << st.round << ','
        << (st.converged ? 1 : 0) << '\n';
    }
  });
  for (std::size_t k = 0; k < d.components.size(); ++k) {
    const auto& p = d.components[k];
    const std::string id = std::to_string(k + 1);
    write_file(c.out / ("u_" + id + ".csv"), [&](std::ostream& o) { write_vector_csv(o, x.row_grid(), p.u, "u"); });
    write_file(c.out / ("v_" + id + ".csv"), [&](std::ostream& o) { write_vector_csv(o, x.col_grid(), p.v, "v"); });
    if (x.rows() >= 3)
      write_file(c.out / ("u_" + id + "_curve.csv"), [&](std::ostream& o) {
        write_spline_csv(o, interpolate(p.u, x.row_grid()), c.curve_points, "u");
      });
    if (x.cols() >= 3)
      write_file(c.out / ("v_" + id + "_curve.csv"), [&](std::ostream& o) {
        write_spline_csv(o, interpolate(p.v, x.col_grid()), c.curve_points, "v");
      });
    if (!p.gcv_u.records.empty())
      write_file(c.out / ("gcv_u_" + id + ".csv"), [&](std::ostream& o) { write_gcv_trace_csv(o, p.gcv_u); });
    if (!p.gcv_v.records.empty())
      write_file(c.out / ("gcv_v_" + id + ".csv"), [&](std::ostream& o) { write_gcv_trace_csv(o, p.gcv_v); });
  }
  write_file(c.out / "residual.csv", [&](std::ostream& o) { io::write_dense_csv(o, residual, c.input.missing_token); });
  write_file(c.out / "reconstruction.csv", [&](std::ostream& o) { io::write_dense_csv(o, reconstruction); });
  write_file(c.out / "energy.csv", [&](std::ostream& o) {
    o << "component,percent\n";
    for (Eigen::Index k = 0; k < energy.size(); ++k) o << k + 1 << ',' << io::format_csv(energy[k]) << '\n';
  });
}

void cmd_simulate(const SimulateConfig& c) {
  require(c.replications >= 1, "--replications must be at least 1");
  require(c.rank == 1 || c.rank == 2, "--rank must be 1 or 2");
  require(c.rows >= 3 && c.cols >= 3, "--rows and --cols must be at least 3");
  require(c.missing >= 0, "--missing must be nonnegative");
  require(c.threads >= 1, "--threads must be at least 1");
  require(c.output_format == "csv" || c.output_format == "json", "--output-format must be csv or json");
  require(!c.scenarios.empty() && !c.sigma2.empty() && !c.methods.empty(),
          "need at least one scenario, noise level and method");
  validate_lambda(c.lambda);

  sim::BenchmarkConfig b;
  b.scenarios.clear();
  for (const auto& s : c.scenarios) b.scenarios.push_back(sim::parse_contamination(s));
  for (double s2 : c.sigma2) require(s2 >= 0 && std::isfinite(s2), "--sigma2 values must be finite and >= 0");
  b.noise_variances = c.sigma2;
  b.methods.clear();
  for (const auto& m : c.methods) b.methods.push_back(parse_method(m));
  b.replications = c.replications;
  b.seed = c.seed;
  b.rank = c.rank;
  b.rows = c.rows;
  b.cols = c.cols;
  b.missing = c.missing;
  b.rank2 = {c.rank2_left_decay, c.rank2_right_frequency, c.rank2_ratio};
  b.loss = loss_spec(c.theta, std::nullopt);
  b.fit = fit_options(c.lambda, c.tolerance, c.max_iter, c.freeze_after, "natural-spline");
  b.threads = c.threads;

  const sim::BenchmarkResult result = sim::run_benchmark(b);
  write_file(c.out, [&](std::ostream& o) {
    if (c.output_format == "csv")
      sim::write_summary_csv(o, result.rows);
    else
      sim::write_summary_json(o, result.rows);
  });

  json failures = json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"scenario", f.scenario}, {"method", f.method}, {"sigma2", f.sigma2},
                        {"replication", f.replication}, {"message", f.message}});
  // Thread count is deliberately absent: it does not affect the output.
  json config{{"scenarios", c.scenarios}, {"sigma2", c.sigma2}, {"methods", c.methods},
              {"replications", c.replications}, {"seed", c.seed}, {"rank", c.rank}, {"rows", c.rows},
              {"cols", c.cols}, {"missing", c.missing}, {"theta", c.theta}, {"lambda", lambda_json(c.lambda)},
              {"tolerance", c.tolerance}, {"max_iter", c.max_iter}, {"freeze_after", c.freeze_after},
              {"rank2_left_decay", c.rank2_left_decay}, {"rank2_right_frequency", c.rank2_right_frequency},
              {"rank2_ratio", c.rank2_ratio}, {"out", c.out.string()}, {"output_format", c.output_format}};
  json manifest_config = config;
  manifest_config["failures"] = failures;
  write_manifest(fs::path(c.out.string() + ".manifest.json"), "simulate", manifest_config);
}

GcvTrace<double> cmd_gcv_trace(const GcvTraceConfig& c) {
  require(c.side == "u" || c.side == "v", "--side must be u or v");
  require(c.fixed_lambda >= 0, "--fixed-lambda must be nonnegative");
  const Method method = parse_method(c.method);
  require(method != Method::svd, "gcv-trace needs a penalized method (rsvd or robrsvd)");
  validate_lambda(c.lambda);

  const ObservedMatrix<double> x = io::load(c.input.file());
  RobustLossSpec<double> loss = method == Method::rsvd ? RobustLossSpec<double>::squared() : loss_spec(c.theta, c.sigma);
  const Matrix<double> start_values = x.complete() ? x.values() : initial_fill(x, ImputationInit::row_mean);
  const SingularTriple<double> t = leading_singular_triple(start_values);
  if (!(t.s > 0)) throw NumericalError("input matrix is zero");
  if (!loss.is_squared() && loss.sigma_source == SigmaSource::mad_from_svd_residuals)
    loss.sigma = estimate_scale_mad(residual(x, t.s, t.u, t.v));

  const Vector<double> sv = t.s * t.v;
  const WeightMatrix<double> w = compute_weights(x, t.u, sv, loss);
  const TwoWayPenaltySpec<double> base =
      TwoWayPenaltySpec<double>::from_grids(x.row_grid(), x.col_grid(), parse_penalty_kind(c.penalty));
  const LambdaGrid<double> grid = c.lambda.grid();
  GcvTrace<double> trace;
  if (c.side == "v") {
    trace = select_lambda(grid, [&](double lv) { return gcv_v(x, t.u, w, base.with_lambdas(c.fixed_lambda, lv)); }).second;
  } else {
    const Vector<double> su = t.s * t.u;
    trace = select_lambda(grid, [&](double lu) { return gcv_u(x, t.v, w, base.with_lambdas(lu, c.fixed_lambda)); }).second;
    (void)su;
  }
  write_file(c.out, [&](std::ostream& o) { write_gcv_trace_csv(o, trace); });
  write_manifest(fs::path(c.out.string() + ".manifest.json"), "gcv-trace",
                 {{"input", input_json(c.input)}, {"side", c.side}, {"fixed_lambda", c.fixed_lambda},
                  {"theta", c.theta}, {"sigma", c.sigma ? json(*c.sigma) : json("mad")}, {"method", c.method},
                  {"penalty", c.penalty}, {"lambda", lambda_json(c.lambda)}, {"out", c.out.string()},
                  {"sigma_used", loss.sigma}});
  return trace;
}

void cmd_transform(const TransformConfig& c) {
  require(c.log2_half, "transform: no transformation requested (pass --log2-half)");
  require(c.output_format == "dense_csv" || c.output_format == "hmd_triplet" || c.output_format == "json",
          "--output-format must be dense_csv, hmd_triplet or json");
  const ObservedMatrix<double> x = io::log_transform(io::load(c.input.file()));
  write_file(c.out, [&](std::ostream& o) {
    if (c.output_format == "json")
      o << io::to_json(x).dump(2) << '\n';
    else if (c.output_format == "dense_csv")
      io::write_dense_csv(o, x, c.input.missing_token);
    else
      io::write_hmd_triplet(o, x, c.input.missing_token);
  });
  write_manifest(fs::path(c.out.string() + ".manifest.json"), "transform",
                 {{"input", input_json(c.input)}, {"log2_half", c.log2_half}, {"out", c.out.string()},
                  {"output_format", c.output_format}});
}

namespace {

void add_input(CLI::App* app, InputOptions& in) {
  app->add_option("input", in.path, "Input matrix file")->required();
  app->add_option("--format", in.format, "dense_csv or hmd_triplet")->capture_default_str();
  app->add_option("--missing-token", in.missing_token, "Token marking a missing cell")->capture_default_str();
  app->add_option("--value-column", in.value_column, "hmd_triplet: zero-based value field")->capture_default_str();
  app->add_option("--skip-lines", in.skip_lines, "hmd_triplet: preamble lines to skip")->capture_default_str();
}

void add_lambda(CLI::App* app, LambdaOptions& l) {
  app->add_option("--lambda-min", l.lambda_min, "Smallest penalty parameter")->capture_default_str();
  app->add_option("--lambda-max", l.lambda_max, "Largest penalty parameter")->capture_default_str();
  app->add_option("--lambda-count", l.lambda_count, "Log-spaced grid size")->capture_default_str();
  app->add_option("--lambdas", l.lambdas, "Explicit penalty grid (overrides min/max/count)")->delimiter(',');
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust regularized SVD for two-way functional data", "robrsvd"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Key-value configuration file; command-line flags take precedence");
  app.require_subcommand(1);

  DecomposeConfig dc;
  std::string dc_sigma;
  auto* dec = app.add_subcommand("decompose", "Sequential rank-r decomposition of a matrix file");
  add_input(dec, dc.input);
  dec->add_option("--method", dc.method, "svd, rsvd or robrsvd")->capture_default_str();
  dec->add_option("--rank", dc.rank, "Number of components")->capture_default_str();
  dec->add_option("--theta", dc.theta, "Huber threshold (inf for squared loss)")->capture_default_str();
  dec->add_option("--sigma", dc_sigma, "Fixed scale (default: MAD of SVD residuals)");
  add_lambda(dec, dc.lambda);
  dec->add_option("--tolerance", dc.tolerance, "Relative objective change for convergence")->capture_default_str();
  dec->add_option("--max-iter", dc.max_iter, "Maximum IRLS iterations")->capture_default_str();
  dec->add_option("--freeze-after", dc.freeze_after, "Freeze penalties after this many iterations (0: never)")
      ->capture_default_str();
  dec->add_option("--penalty", dc.penalty, "natural-spline or second-difference")->capture_default_str();
  dec->add_option("--impute-init", dc.impute_init, "row or column mean initial fill")->capture_default_str();
  dec->add_option("--impute-tol", dc.impute_tol, "Imputation tolerance relative to data range")->capture_default_str();
  dec->add_option("--impute-max-rounds", dc.impute_max_rounds, "Maximum imputation rounds")->capture_default_str();
  dec->add_flag("--log2-half", dc.log2_half, "Apply log2(x + 1/2) before fitting");
  dec->add_option("--curve-points", dc.curve_points, "Spline evaluation points per curve")->capture_default_str();
  dec->add_option("--out", dc.out, "Output directory")->capture_default_str();
  dec->add_option("--output-format", dc.output_format, "csv or json")->capture_default_str();

  SimulateConfig sc;
  auto* simc = app.add_subcommand("simulate", "Simulation benchmark of svd / rsvd / robrsvd");
  simc->add_option("--scenarios", sc.scenarios, "Contamination scenarios")->delimiter(',')->capture_default_str();
  simc->add_option("--sigma2", sc.sigma2, "Noise variances")->delimiter(',')->capture_default_str();
  simc->add_option("--methods", sc.methods, "Methods")->delimiter(',')->capture_default_str();
  simc->add_option("--replications", sc.replications, "Replications per setting")->capture_default_str();
  simc->add_option("--seed", sc.seed, "Base seed")->capture_default_str();
  simc->add_option("--rank", sc.rank, "Signal rank (1 or 2)")->capture_default_str();
  simc->add_option("--rows", sc.rows, "Grid points in y")->capture_default_str();
  simc->add_option("--cols", sc.cols, "Grid points in z")->capture_default_str();
  simc->add_option("--missing", sc.missing, "Cells deleted per replication")->capture_default_str();
  simc->add_option("--theta", sc.theta, "Huber threshold")->capture_default_str();
  add_lambda(simc, sc.lambda);
  simc->add_option("--tolerance", sc.tolerance, "Relative objective change for convergence")->capture_default_str();
  simc->add_option("--max-iter", sc.max_iter, "Maximum IRLS iterations")->capture_default_str();
  simc->add_option("--freeze-after", sc.freeze_after, "Freeze penalties after this many iterations")
      ->capture_default_str();
  simc->add_option("--rank2-left-decay", sc.rank2_left_decay, "Rank-two left shape exp(-a y)")->capture_default_str();
  simc->add_option("--rank2-right-frequency", sc.rank2_right_frequency, "Rank-two right shape cos(2 pi f z)")
      ->capture_default_str();
  simc->add_option("--rank2-ratio", sc.rank2_ratio, "s1 / s0 of the rank-two signal")->capture_default_str();
  simc->add_option("--threads", sc.threads, "Worker threads")->capture_default_str();
  simc->add_option("--out", sc.out, "Summary output file")->capture_default_str();
  simc->add_option("--output-format", sc.output_format, "csv or json")->capture_default_str();

  GcvTraceConfig gc;
  std::string gc_sigma;
  auto* gcv = app.add_subcommand("gcv-trace", "GCV scores for one conditional step from the SVD start");
  add_input(gcv, gc.input);
  gcv->add_option("--side", gc.side, "v (select lambda_v) or u")->capture_default_str();
  gcv->add_option("--fixed-lambda", gc.fixed_lambda, "Penalty of the other side")->capture_default_str();
  gcv->add_option("--theta", gc.theta, "Huber threshold")->capture_default_str();
  gcv->add_option("--sigma", gc_sigma, "Fixed scale (default: MAD of SVD residuals)");
  gcv->add_option("--method", gc.method, "rsvd or robrsvd")->capture_default_str();
  gcv->add_option("--penalty", gc.penalty, "natural-spline or second-difference")->capture_default_str();
  add_lambda(gcv, gc.lambda);
  gcv->add_option("--out", gc.out, "Trace CSV path")->capture_default_str();

  TransformConfig tc;
  auto* tr = app.add_subcommand("transform", "Apply log2(x + 1/2) to a matrix file");
  add_input(tr, tc.input);
  tr->add_flag("--log2-half", tc.log2_half, "Apply log2(x + 1/2)");
  tr->add_option("--out", tc.out, "Output path")->capture_default_str();
  tr->add_option("--output-format", tc.output_format, "dense_csv, hmd_triplet or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  auto parse_sigma = [](const std::string& s) -> std::optional<double> {
    if (s.empty() || s == "mad") return std::nullopt;
    try {
      return std::stod(s);
    } catch (const std::exception&) {
      throw ContractViolation("--sigma must be a positive number or 'mad'");
    }
  };

  try {
    if (*dec) {
      dc.sigma = parse_sigma(dc_sigma);
      cmd_decompose(dc);
      out << "wrote " << dc.out.string() << '\n';
    } else if (*simc) {
      cmd_simulate(sc);
      out << "wrote " << sc.out.string() << '\n';
    } else if (*gcv) {
      gc.sigma = parse_sigma(gc_sigma);
      const GcvTrace<double> t = cmd_gcv_trace(gc);
      out << "chosen lambda " << io::format_shortest(t.chosen().lambda) << '\n';
    } else if (*tr) {
      cmd_transform(tc);
      out << "wrote " << tc.out.string() << '\n';
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data(), out, err);
}

}  // namespace robrsvd::cli
