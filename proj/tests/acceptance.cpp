// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exits nonzero
// if any criterion fails.

#include "oracles.hpp"

#include "robrsvd/cli.hpp"
#include "robrsvd/ingest.hpp"
#include "robrsvd/sim.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace robrsvd;
using oracle::Mat;
using oracle::Vec;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

std::string fmt(double x, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

// Keeps the largest value seen; used for worst-case error reporting.
struct Worst {
  double value = 0;
  void operator()(double x) { value = std::max(value, x); }
};

TwoWayPenaltySpec<double> spec_for(const ObservedMatrix<double>& x, double lu, double lv) {
  return TwoWayPenaltySpec<double>::from_grids(x.row_grid(), x.col_grid()).with_lambdas(lu, lv);
}

double triple_distance(const SingularTriple<double>& a, const SingularTriple<double>& b) {
  // Both follow the same sign convention, so no flipping is needed.
  return std::max({std::abs(a.s - b.s), (a.u - b.u).norm(), (a.v - b.v).norm()});
}

// 1. Squared loss reduces RobRSVD to RSVD; a vanishing penalty reduces RSVD to SVD.
Outcome baseline_reduction() {
  std::mt19937_64 rng(101);
  Worst robust_vs_rsvd, rsvd_vs_svd;
  for (int k = 0; k < 20; ++k) {
    const ObservedMatrix<double> x(oracle::random_matrix(rng, 10, 8));
    const auto rsvd = fit_rank_one_rsvd(x, FitOptions<double>{});
    const auto squared = fit_rank_one_robrsvd(x, RobustLossSpec<double>::squared(), FitOptions<double>{});
    robust_vs_rsvd(triple_distance(squared.triple(), rsvd.triple()));

    FitOptions<double> tiny;
    tiny.lambda_u_grid = tiny.lambda_v_grid = LambdaGrid<double>::single(1e-12);
    tiny.tolerance = 1e-15;
    tiny.max_iterations = 100000;
    const auto near_svd = fit_rank_one_rsvd(x, tiny);
    rsvd_vs_svd(triple_distance(near_svd.triple(), oracle::leading_triple(x.values())));
  }
  return check(robust_vs_rsvd.value <= 1e-8 && rsvd_vs_svd.value <= 1e-6,
               "max |robrsvd(theta=inf) - rsvd| = " + fmt(robust_vs_rsvd.value) +
                   ", max |rsvd(lambda=1e-12) - svd| = " + fmt(rsvd_vs_svd.value));
}

// 2. Structured updates, hat traces and GCV against the literal mn-sized system.
Outcome dense_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> dim(3, 10);
  // Penalty parameters span the range where the normal matrix stays
  // reasonably conditioned; see worst_condition in the report.
  std::uniform_real_distribution<double> loglam(-6, -1);
  Worst worst, worst_condition;
  for (int k = 0; k < 50; ++k) {
    Eigen::Index m = dim(rng), n = dim(rng);
    while (m * n > 100) n = dim(rng);
    const oracle::Case c = oracle::random_case(rng, m, n, int(m * n / 6), 2);
    const double lu = std::pow(10.0, loglam(rng)), lv = std::pow(10.0, loglam(rng));
    const auto spec = spec_for(c.x, lu, lv);
    const WeightMatrix<double> w{c.w};
    const oracle::Dense dv = oracle::dense_v_system(c.x.values(), c.w, c.u, spec.omega_u, spec.omega_v, lu, lv);
    const Mat xt = c.x.values().transpose(), wt = c.w.transpose();
    const oracle::Dense du = oracle::dense_v_system(xt, wt, c.v, spec.omega_v, spec.omega_u, lv, lu);
    for (const Mat* m : {&dv.M, &du.M}) {
      const Eigen::SelfAdjointEigenSolver<Mat> es(*m);
      worst_condition(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff());
    }
    worst(oracle::relative_error(update_v_given_u(c.x, c.u, w, spec), oracle::dense_v_update(dv)));
    worst(oracle::relative_error(hat_trace_v(c.u, w, spec), oracle::dense_hat(dv).trace()));
    worst(oracle::relative_error(gcv_v(c.x, c.u, w, spec).score, oracle::dense_gcv(dv)));
    worst(oracle::relative_error(update_u_given_v(c.x, c.v, w, spec), oracle::dense_v_update(du)));
    worst(oracle::relative_error(hat_trace_u(c.v, w, spec), oracle::dense_hat(du).trace()));
    worst(oracle::relative_error(gcv_u(c.x, c.v, w, spec).score, oracle::dense_gcv(du)));
  }
  return check(worst.value <= 1e-10, "50 cases, worst relative error " + fmt(worst.value) +
                                         ", worst condition number " + fmt(worst_condition.value));
}

// Largest step-to-step increase of the objective history after entry `first`,
// relative to |R|.
double worst_increase(const std::vector<double>& history, std::size_t first) {
  double worst = 0;
  for (std::size_t i = first + 1; i < history.size(); ++i)
    worst = std::max(worst, (history[i] - history[i - 1]) / std::max(std::abs(history[i - 1]), 1e-300));
  return worst;
}

// 3. With frozen penalty parameters the objective never increases.
Outcome monotone_objective() {
  std::vector<ObservedMatrix<double>> suite;
  std::mt19937_64 rng(303);
  for (int k = 0; k < 30; ++k) {
    std::uniform_int_distribution<int> dim(4, 25);
    const Eigen::Index m = dim(rng), n = dim(rng);
    suite.push_back(oracle::random_case(rng, m, n, k % 3 == 0 ? int(m * n / 10) : 0, 3).x);
  }
  for (auto c : {sim::Contamination::none, sim::Contamination::outlying_cells, sim::Contamination::outlying_rows,
                 sim::Contamination::outlying_block, sim::Contamination::diagonal}) {
    sim::SimScenario sc;
    sc.rows = sc.cols = 40;
    sc.contamination = c;
    sc.seed = 17;
    suite.push_back(sim::generate(sc).data);
  }
  suite.push_back(io::load({fs::path(ROBRSVD_TEST_DATA_DIR) / "contaminated_sample.csv"}));

  double worst = 0;
  int fits = 0;
  for (const auto& x : suite) {
    FitOptions<double> selected;
    const auto a = fit_rank_one_robrsvd(x, RobustLossSpec<double>{}, selected);
    // Entry 2k is the objective after iteration k; penalties are fixed from there on.
    worst = std::max(worst, worst_increase(a.objective_history, 2 * std::size_t(selected.freeze_lambda_after)));
    FitOptions<double> fixed;
    fixed.lambda_u_grid = LambdaGrid<double>::single(0.01);
    fixed.lambda_v_grid = LambdaGrid<double>::single(0.1);
    const auto b = fit_rank_one_robrsvd(x, RobustLossSpec<double>{}, fixed);
    worst = std::max(worst, worst_increase(b.objective_history, 0));
    fits += 2;
  }
  return check(worst <= 1e-10, std::to_string(fits) + " fits, largest relative increase " + fmt(worst));
}

std::map<std::string, double> medians(const sim::BenchmarkResult& r) {
  std::map<std::string, double> out;
  for (const auto& row : r.rows) out[row.scenario + "/" + row.method + "/" + row.metric] = row.median;
  return out;
}

// 4. Robust fit beats both baselines under contamination and stays close to RSVD without it.
Outcome simulation_ordering() {
  sim::BenchmarkConfig cfg;
  cfg.scenarios = {sim::Contamination::none, sim::Contamination::outlying_cells, sim::Contamination::outlying_rows,
                   sim::Contamination::outlying_block, sim::Contamination::diagonal};
  cfg.rows = cfg.cols = 40;
  cfg.replications = 20;
  cfg.noise_variances = {1.0};
  const auto r = sim::run_benchmark(cfg);
  const auto med = medians(r);
  std::vector<std::string> violations;
  for (const auto& scenario : {"outlying_cells", "outlying_rows", "outlying_block", "diagonal"})
    for (const auto& metric : sim::metric_names(1)) {
      const auto key = [&](const char* method) { return std::string(scenario) + "/" + method + "/" + metric; };
      const double rob = med.at(key("robrsvd"));
      for (const char* other : {"svd", "rsvd"})
        if (!(rob < med.at(key(other))))
          violations.push_back(std::string(scenario) + " " + metric + ": robrsvd " + fmt(rob, 4) + " vs " + other +
                               " " + fmt(med.at(key(other)), 4));
    }
  for (const std::string metric : {"l2_u", "l2_v"}) {
    const double rob = med.at("none/robrsvd/" + metric), rsvd = med.at("none/rsvd/" + metric);
    if (!(rob <= 1.25 * rsvd))
      violations.push_back("none " + metric + ": robrsvd " + fmt(rob, 4) + " vs rsvd " + fmt(rsvd, 4));
  }
  if (!r.failures.empty()) violations.push_back(std::to_string(r.failures.size()) + " failed replications");
  std::string detail = "40x40, 20 reps, sigma2 = 1";
  for (const auto& v : violations) detail += "; " + v;
  return check(violations.empty(), detail);
}

// 5. Imputation recovers an exactly rank-one matrix and keeps the robust ordering.
Outcome missing_data() {
  sim::SimScenario sc;
  sc.rows = sc.cols = 40;
  sc.noise_variance = 0;
  sc.seed = 5;
  const sim::SimResult truth = sim::mask_random(sim::generate(sc), 100, 55);
  ImputationOptions<double> iopts;
  iopts.relative_tolerance = 1e-12;
  iopts.max_rounds = 5000;
  FitOptions<double> unpenalized;
  unpenalized.lambda_u_grid = unpenalized.lambda_v_grid = LambdaGrid<double>::single(1e-12);
  unpenalized.tolerance = 1e-14;
  unpenalized.max_iterations = 1000;
  std::string detail;
  bool ok = true;
  for (Method method : {Method::svd, Method::robrsvd}) {
    const auto [fit, state] = fit_with_missing(truth.data, method, RobustLossSpec<double>{}, unpenalized, iopts);
    const double err = std::max({sim::metric_l2(fit.u, truth.u0), sim::metric_l2(fit.v, truth.v0),
                                 std::abs(fit.s - truth.s0) / truth.s0});
    ok = ok && err <= 1e-5;
    detail += to_string(method) + " recovery error " + fmt(err) + " (" + std::to_string(state.round) + " rounds); ";
  }

  sim::BenchmarkConfig cfg;
  cfg.scenarios = {sim::Contamination::outlying_cells};
  cfg.methods = {Method::rsvd, Method::robrsvd};
  cfg.rows = cfg.cols = 40;
  cfg.noise_variances = {0.2};
  cfg.replications = 10;
  cfg.missing = 100;
  const auto med = medians(sim::run_benchmark(cfg));
  for (const char* metric : {"l2_u", "l2_v"}) {
    const double rob = med.at(std::string("outlying_cells/robrsvd/") + metric);
    const double rsvd = med.at(std::string("outlying_cells/rsvd/") + metric);
    ok = ok && rob <= rsvd;
    detail += std::string(metric) + " robrsvd " + fmt(rob) + " vs rsvd " + fmt(rsvd) + "; ";
  }
  detail.resize(detail.size() - 2);
  return check(ok, detail);
}

// 6. Rank two by deflation under outlying rows.
Outcome rank_two() {
  sim::BenchmarkConfig cfg;
  cfg.scenarios = {sim::Contamination::outlying_rows};
  cfg.methods = {Method::svd, Method::robrsvd};
  cfg.rank = 2;
  cfg.noise_variances = {1.0};
  cfg.replications = 10;
  const auto med = medians(sim::run_benchmark(cfg));
  bool ok = true;
  std::string detail = "100x100, 10 reps";
  for (const char* metric : {"angle_u"}) {
    const double rob = med.at(std::string("outlying_rows/robrsvd/") + metric);
    const double svd = med.at(std::string("outlying_rows/svd/") + metric);
    ok = ok && rob < svd;
    detail += std::string("; ") + metric + " robrsvd " + fmt(rob) + " deg vs svd " + fmt(svd) + " deg";
  }
  return check(ok, detail);
}

// 7. Penalty scale invariance and spline roughness identity.
Outcome invariances() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> dim(3, 30), pow2(-20, 20);
  std::uniform_real_distribution<double> loglam(-4, 3), logc(-3, 3);
  int exact_mismatch = 0;
  Worst random_c, roughness;
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index m = dim(rng), n = dim(rng);
    const auto spec = TwoWayPenaltySpec<double>::from_grids(oracle::random_grid(rng, m), oracle::random_grid(rng, n))
                          .with_lambdas(std::pow(10.0, loglam(rng)), std::pow(10.0, loglam(rng)));
    const Vec u = oracle::random_vector(rng, m), v = oracle::random_vector(rng, n);
    const double base = two_way_penalty(u, v, spec);
    const double c2 = std::ldexp(1.0, pow2(rng));
    if (two_way_penalty(Vec(c2 * u), Vec(v / c2), spec) != base) ++exact_mismatch;
    const double c = std::pow(10.0, logc(rng));
    random_c(oracle::relative_error(two_way_penalty(Vec(c * u), Vec(v / c), spec), base));
  }
  for (int k = 0; k < 100; ++k) {
    const Vec t = oracle::random_grid(rng, dim(rng));
    const Vec g = oracle::random_vector(rng, t.size());
    const double quadratic = g.dot(build_roughness_penalty(t) * g);
    roughness(oracle::relative_error(interpolate(g, t).roughness(), quadratic));
    roughness(oracle::relative_error(oracle::roughness(oracle::natural_spline(t, g)), quadratic));
  }
  return check(exact_mismatch == 0 && random_c.value <= 1e-12 && roughness.value <= 1e-8,
               "1000 triples: " + std::to_string(exact_mismatch) + " power-of-two mismatches, random c worst " +
                   fmt(random_c.value) + "; 100 splines: roughness worst " + fmt(roughness.value));
}

// Sum of |u_t - 7-year centered moving average| over the given years.
double shock_deviation(const Vec& u, const Vec& years, const std::vector<double>& shocks) {
  double total = 0;
  for (double year : shocks)
    for (Eigen::Index t = 0; t < years.size(); ++t) {
      if (years(t) != year) continue;
      const Eigen::Index lo = std::max<Eigen::Index>(0, t - 3), hi = std::min<Eigen::Index>(years.size() - 1, t + 3);
      total += std::abs(u(t) - u.segment(lo, hi - lo + 1).mean());
    }
  return total;
}

// 8. Spanish mortality: energy shares and the robust year profile at historical shocks.
Outcome mortality() {
  fs::path path = fs::path(ROBRSVD_TEST_DATA_DIR) / "Mx_1x1_spain.txt";
  if (const char* env = std::getenv("ROBRSVD_HMD_FILE")) path = env;
  if (!fs::exists(path)) return {Verdict::skip, "mortality file not found (" + path.string() + "; set ROBRSVD_HMD_FILE)"};

  io::MatrixFile file{path, io::MatrixFormat::hmd_triplet};
  file.value_column = 4;
  if (const char* env = std::getenv("ROBRSVD_HMD_VALUE_COLUMN")) file.value_column = std::atoi(env);
  const ObservedMatrix<double> all = io::load(file);
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index i = 0; i < all.rows(); ++i)
    if (all.row_grid()(i) >= 1908 && all.row_grid()(i) <= 2007) rows.push_back(i);
  for (Eigen::Index j = 0; j < all.cols(); ++j)
    if (all.col_grid()(j) <= 110) cols.push_back(j);
  if (rows.size() != 100 || cols.size() != 111)
    return {Verdict::fail, "expected years 1908-2007 and ages 0-110, found " + std::to_string(rows.size()) + "x" +
                               std::to_string(cols.size())};
  Mat values(rows.size(), cols.size());
  Mask mask(rows.size(), cols.size());
  Vec years(rows.size()), ages(cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) years(a) = all.row_grid()(rows[a]);
  for (std::size_t b = 0; b < cols.size(); ++b) ages(b) = all.col_grid()(cols[b]);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) {
      values(a, b) = all.values()(rows[a], cols[b]);
      mask(a, b) = all.observed(rows[a], cols[b]);
    }
  const ObservedMatrix<double> x = io::log_transform(ObservedMatrix<double>(values, mask, years, ages));

  const auto robust = fit(x, Method::robrsvd, 2);
  const auto svd = fit(x, Method::svd, 1);
  const Vec energy = io::energy_percentages(impute(x, robust), 2);
  const std::vector<double> shocks{1918, 1936, 1937, 1938, 1939};
  const double rob_dev = shock_deviation(robust.components.front().u, years, shocks);
  const double svd_dev = shock_deviation(svd.components.front().u, years, shocks);
  const bool energy_ok = std::abs(energy(0) - 93.3) <= 0.7 && std::abs(energy(1) - 5.0) <= 0.7;
  return check(energy_ok && rob_dev < svd_dev, "energy " + fmt(energy(0)) + "% / " + fmt(energy(1)) +
                                                   "%; shock-year deviation robrsvd " + fmt(rob_dev) + " vs svd " +
                                                   fmt(svd_dev));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 9. Simulation output is byte-identical across runs and thread counts.
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("robrsvd_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto run = [&](const std::string& name, int threads) {
    const fs::path out = dir / name;
    std::ostringstream sink;
    const int code = cli::run({"robrsvd", "simulate", "--rows", "30", "--cols", "30", "--replications", "4",
                               "--sigma2", "0.2,1", "--seed", "9", "--threads", std::to_string(threads), "--out",
                               out.string()},
                              sink, sink);
    if (code != 0) throw std::runtime_error("simulate failed: " + sink.str());
    return slurp(out);
  };
  const std::string a = run("a.csv", 1), b = run("b.csv", 1), c = run("c.csv", 4);
  fs::remove_all(dir);
  return check(!a.empty() && a == b && a == c,
               std::to_string(a.size()) + " bytes; repeat " + (a == b ? "identical" : "differs") + ", 1 vs 4 threads " +
                   (a == c ? "identical" : "differs"));
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "baseline reduction", baseline_reduction, 10},
      {2, "structured vs dense conditional solves", dense_equivalence, 30},
      {3, "monotone objective with frozen penalties", monotone_objective, 0},
      {4, "simulation ordering", simulation_ordering, 600},
      {5, "missing data", missing_data, 0},
      {6, "rank two", rank_two, 0},
      {7, "scale invariance and spline roughness", invariances, 0},
      {8, "mortality data", mortality, 0},
      {9, "deterministic simulation output", determinism, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds && outcome.verdict == Verdict::pass)
      outcome = {Verdict::fail, outcome.detail + "; over the " + fmt(c.budget_seconds) + " s budget"};
    const char* tag = outcome.verdict == Verdict::pass ? "PASS" : outcome.verdict == Verdict::fail ? "FAIL" : "SKIP";
    if (outcome.verdict == Verdict::fail) ++failed;
    std::cout << tag << "  " << c.id << "  " << c.name << ": " << outcome.detail << " [" << fmt(seconds, 2) << " s]"
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
