#include "robrsvd/sim.hpp"

#include "robrsvd/format.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <thread>

namespace robrsvd::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint32_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream_id};
  return std::mt19937_64(seq);
}

/// `count` distinct indices from [0, total), partial Fisher-Yates.
std::vector<Eigen::Index> sample_without_replacement(Eigen::Index total, Eigen::Index count,
                                                     std::mt19937_64& rng) {
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(total));
  for (Eigen::Index i = 0; i < total; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Eigen::Index> pick(i, total - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

Vector<double> unit(Vector<double> x) { return x / x.norm(); }

Vector<double> orthonormalize_against(Vector<double> x, const Vector<double>& basis) {
  x -= basis.dot(x) * basis;
  return unit(std::move(x));
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::string to_string(Contamination c) {
  switch (c) {
    case Contamination::none: return "none";
    case Contamination::outlying_cells: return "outlying_cells";
    case Contamination::outlying_rows: return "outlying_rows";
    case Contamination::outlying_block: return "outlying_block";
    case Contamination::diagonal: return "diagonal";
  }
  return "unknown";
}

Contamination parse_contamination(const std::string& name) {
  for (auto c : {Contamination::none, Contamination::outlying_cells, Contamination::outlying_rows,
                 Contamination::outlying_block, Contamination::diagonal})
    if (to_string(c) == name) return c;
  throw ContractViolation("unknown contamination scenario '" + name +
                          "' (expected none, outlying_cells, outlying_rows, outlying_block or diagonal)");
}

Matrix<double> SimResult::left_truth() const {
  Matrix<double> out(u0.size(), u1.size() > 0 ? 2 : 1);
  out.col(0) = u0;
  if (u1.size() > 0) out.col(1) = u1;
  return out;
}

Matrix<double> SimResult::right_truth() const {
  Matrix<double> out(v0.size(), v1.size() > 0 ? 2 : 1);
  out.col(0) = v0;
  if (v1.size() > 0) out.col(1) = v1;
  return out;
}

SimResult generate(const SimScenario& sc) {
  require(sc.rank == 1 || sc.rank == 2, "simulation rank must be 1 or 2");
  require(sc.rows >= 3 && sc.cols >= 3, "simulation grid must be at least 3x3");
  require(sc.noise_variance >= 0.0 && std::isfinite(sc.noise_variance),
          "noise variance must be finite and nonnegative");
  const Eigen::Index m = sc.rows, n = sc.cols;
  switch (sc.contamination) {
    case Contamination::outlying_cells:
      require(m * n > 100, "outlying_cells needs more than 100 cells");
      break;
    case Contamination::outlying_rows:
      require(m >= 5, "outlying_rows needs at least 5 rows");
      break;
    case Contamination::outlying_block:
      require(std::min(m, n) >= 10, "grid too small for a 10x10 outlying block");
      break;
    default: break;
  }

  const Vector<double> y = unit_grid(m), z = unit_grid(n);
  SimResult out;
  out.u0 = unit(y.unaryExpr([](double t) { return std::pow(10.0, t); }));
  out.v0 = unit(z.unaryExpr([](double t) { return std::sin(kTwoPi * t); }));
  out.signal = out.s0 * out.u0 * out.v0.transpose();
  if (sc.rank == 2) {
    const Rank2Config& r2 = sc.rank2;
    out.u1 = orthonormalize_against(y.unaryExpr([&](double t) { return std::exp(-r2.left_decay * t); }), out.u0);
    out.v1 = orthonormalize_against(
        z.unaryExpr([&](double t) { return std::cos(kTwoPi * r2.right_frequency * t); }), out.v0);
    out.s1 = r2.singular_ratio * out.s0;
    out.signal += out.s1 * out.u1 * out.v1.transpose();
  }
  const double c1 = out.signal.maxCoeff();

  std::mt19937_64 noise_rng = stream(sc.seed, 1);
  std::mt19937_64 outlier_rng = stream(sc.seed, 2);

  Matrix<double> surface = out.signal;
  std::vector<Eigen::Index> rows;
  if (sc.contamination == Contamination::outlying_rows) {
    // Row curves s0 u0(y_i) v1(z) with v1 = C (1 + sin(4 pi z)), C normalizing.
    const Vector<double> shape = unit(z.unaryExpr([](double t) { return 1.0 + std::sin(2.0 * kTwoPi * t); }));
    rows = sample_without_replacement(m, 5, outlier_rng);
    std::sort(rows.begin(), rows.end());
    for (Eigen::Index i : rows) surface.row(i) = out.s0 * out.u0[i] * shape.transpose();
  }

  Matrix<double> x(m, n);
  if (sc.noise_variance > 0.0) {
    std::normal_distribution<double> noise(0.0, std::sqrt(sc.noise_variance));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < m; ++i) x(i, j) = surface(i, j) + noise(noise_rng);
  } else {
    x = surface;
  }

  std::uniform_real_distribution<double> between_c1_2c1(c1, 2.0 * c1);
  switch (sc.contamination) {
    case Contamination::none: break;
    case Contamination::outlying_cells: {
      std::vector<Eigen::Index> cells = sample_without_replacement(m * n, 100, outlier_rng);
      std::sort(cells.begin(), cells.end());
      for (Eigen::Index c : cells) {
        const Eigen::Index i = c % m, j = c / m;
        x(i, j) = between_c1_2c1(outlier_rng);
        out.contaminated_cells.emplace_back(i, j);
      }
      break;
    }
    case Contamination::outlying_rows:
      for (Eigen::Index i : rows)
        for (Eigen::Index j = 0; j < n; ++j) out.contaminated_cells.emplace_back(i, j);
      break;
    case Contamination::outlying_block: {
      std::uniform_int_distribution<Eigen::Index> top(0, m - 10), left(0, n - 10);
      const Eigen::Index i0 = top(outlier_rng), j0 = left(outlier_rng);
      std::uniform_real_distribution<double> shift(2.0 * c1, 3.0 * c1);
      for (Eigen::Index j = j0; j < j0 + 10; ++j)
        for (Eigen::Index i = i0; i < i0 + 10; ++i) {
          x(i, j) += shift(outlier_rng);
          out.contaminated_cells.emplace_back(i, j);
        }
      break;
    }
    case Contamination::diagonal:
      for (Eigen::Index d = 0; d < std::min(m, n); ++d) {
        x(d, d) = between_c1_2c1(outlier_rng);
        out.contaminated_cells.emplace_back(d, d);
      }
      break;
  }
  out.data = ObservedMatrix<double>(std::move(x), Mask::Constant(m, n, true), y, z);
  return out;
}

SimResult mask_random(SimResult result, Eigen::Index count, std::uint64_t seed) {
  const Eigen::Index m = result.data.rows(), n = result.data.cols();
  require(count >= 0 && count < m * n, "mask count must be in [0, m*n)");
  if (count == 0) return result;
  std::mt19937_64 rng = stream(seed, 3);
  Mask mask = result.data.mask();
  for (Eigen::Index c : sample_without_replacement(m * n, count, rng)) mask(c % m, c / m) = false;
  result.data = result.data.with_mask(std::move(mask));
  return result;
}

double metric_l2(const Vector<double>& est, const Vector<double>& truth) {
  require(est.size() == truth.size(), "metric_l2: vectors differ in length");
  const double sign = est.dot(truth) < 0.0 ? -1.0 : 1.0;
  return (sign * est - truth).norm();
}

double metric_singular_value(double est, double truth) { return std::abs(est - truth); }

double metric_principal_angle(const Matrix<double>& est_basis, const Matrix<double>& true_basis) {
  require(est_basis.rows() == true_basis.rows() && est_basis.cols() == true_basis.cols(),
          "principal angle: bases differ in shape");
  const Eigen::Index m = est_basis.rows(), k = est_basis.cols();
  require(k >= 1 && k <= m, "principal angle: need between 1 and m basis columns");
  auto orthonormal = [&](const Matrix<double>& b, const char* which) {
    Eigen::ColPivHouseholderQR<Matrix<double>> rank_check(b);
    if (rank_check.rank() < k)
      throw NumericalError(std::string("principal angle: ") + which + " basis is rank deficient");
    Eigen::HouseholderQR<Matrix<double>> qr(b);
    return Matrix<double>(qr.householderQ() * Matrix<double>::Identity(m, k));
  };
  const Matrix<double> cross = orthonormal(est_basis, "estimated").transpose() *
                               orthonormal(true_basis, "true");
  Eigen::JacobiSVD<Matrix<double>> svd(cross);
  const double rho = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  return std::acos(rho) * 180.0 / std::numbers::pi;
}

double metric_frobenius(const Matrix<double>& est, const Matrix<double>& truth) {
  require(est.rows() == truth.rows() && est.cols() == truth.cols(), "metric_frobenius: shape mismatch");
  return (est - truth).norm();
}

Quartiles quartiles(std::vector<double> values) {
  require(!values.empty(), "quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

std::uint64_t replication_seed(std::uint64_t base, Contamination c, int rank, double sigma2, int rep) {
  std::uint64_t bits = 0;
  static_assert(sizeof bits == sizeof sigma2);
  std::memcpy(&bits, &sigma2, sizeof bits);
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(c));
  h = splitmix64(h ^ static_cast<std::uint64_t>(rank));
  h = splitmix64(h ^ bits);
  return splitmix64(h ^ static_cast<std::uint64_t>(rep));
}

std::vector<std::string> metric_names(int rank) {
  if (rank == 1) return {"l2_u", "l2_v", "abs_s"};
  return {"frobenius", "angle_u", "angle_v"};
}

namespace {

std::vector<double> evaluate_metrics(const SimResult& truth, const Decomposition<double>& d, int rank) {
  if (rank == 1) {
    const auto& c = d.components.front();
    return {metric_l2(c.u, truth.u0), metric_l2(c.v, truth.v0), metric_singular_value(c.s, truth.s0)};
  }
  return {metric_frobenius(d.reconstruction(), truth.signal),
          metric_principal_angle(d.left_vectors(), truth.left_truth()),
          metric_principal_angle(d.right_vectors(), truth.right_truth())};
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
  require(cfg.replications >= 1, "replications must be at least 1");
  require(cfg.rank == 1 || cfg.rank == 2, "benchmark rank must be 1 or 2");
  require(!cfg.scenarios.empty() && !cfg.noise_variances.empty() && !cfg.methods.empty(),
          "benchmark needs at least one scenario, noise level and method");
  const std::vector<std::string> metrics = metric_names(cfg.rank);
  const std::size_t n_methods = cfg.methods.size(), n_metrics = metrics.size();

  struct Job {
    std::size_t scenario, noise;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s)
    for (std::size_t q = 0; q < cfg.noise_variances.size(); ++q)
      for (int r = 0; r < cfg.replications; ++r) jobs.push_back({s, q, r});

  // values[job][method] -> metrics, or an error message.
  struct Outcome {
    std::vector<double> metrics;
    std::string error;
  };
  std::vector<std::vector<Outcome>> outcomes(jobs.size(), std::vector<Outcome>(n_methods));

  auto run_job = [&](std::size_t idx) {
    const Job& job = jobs[idx];
    const Contamination c = cfg.scenarios[job.scenario];
    const double sigma2 = cfg.noise_variances[job.noise];
    const std::uint64_t seed = replication_seed(cfg.seed, c, cfg.rank, sigma2, job.rep);
    SimResult data;
    try {
      SimScenario sc{cfg.rank, cfg.rows, cfg.cols, sigma2, c, seed, cfg.rank2};
      data = generate(sc);
      if (cfg.missing > 0) data = mask_random(std::move(data), cfg.missing, splitmix64(seed));
    } catch (const std::exception& e) {
      for (auto& o : outcomes[idx]) o.error = std::string("generation failed: ") + e.what();
      return;
    }
    for (std::size_t k = 0; k < n_methods; ++k) {
      try {
        const Decomposition<double> d =
            fit(data.data, cfg.methods[k], cfg.rank, cfg.loss, cfg.fit, cfg.imputation);
        outcomes[idx][k].metrics = evaluate_metrics(data, d, cfg.rank);
      } catch (const std::exception& e) {
        outcomes[idx][k].error = e.what();
      }
    }
  };

  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(i);
      });
    for (auto& th : pool) th.join();
  }

  BenchmarkResult result;
  for (std::size_t s = 0; s < cfg.scenarios.size(); ++s)
    for (std::size_t k = 0; k < n_methods; ++k)
      for (std::size_t q = 0; q < cfg.noise_variances.size(); ++q) {
        std::vector<std::vector<double>> per_metric(n_metrics);
        for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
          if (jobs[idx].scenario != s || jobs[idx].noise != q) continue;
          const Outcome& o = outcomes[idx][k];
          if (!o.error.empty()) {
            result.failures.push_back({to_string(cfg.scenarios[s]), robrsvd::to_string(cfg.methods[k]),
                                         cfg.noise_variances[q], jobs[idx].rep, o.error});
            continue;
          }
          for (std::size_t mi = 0; mi < n_metrics; ++mi) per_metric[mi].push_back(o.metrics[mi]);
        }
        for (std::size_t mi = 0; mi < n_metrics; ++mi) {
          const int count = static_cast<int>(per_metric[mi].size());
          const double nan = std::numeric_limits<double>::quiet_NaN();
          const Quartiles qs = count > 0 ? quartiles(per_metric[mi]) : Quartiles{nan, nan, nan};
          result.rows.push_back({to_string(cfg.scenarios[s]), robrsvd::to_string(cfg.methods[k]),
                                 cfg.noise_variances[q], metrics[mi], qs.median, qs.q1, qs.q3, count});
          result.samples.push_back(std::move(per_metric[mi]));
        }
      }
  return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "scenario,method,sigma2,metric,median,q1,q3,replications\n";
  for (const auto& r : rows)
    out << r.scenario << ',' << r.method << ',' << io::format_csv(r.sigma2) << ',' << r.metric << ','
        << io::format_csv(r.median) << ',' << io::format_csv(r.q1) << ',' << io::format_csv(r.q3) << ','
        << r.replications << '\n';
}

void write_summary_json(std::ostream& out, const std::vector<SummaryRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"scenario", r.scenario},
                   {"method", r.method},
                   {"sigma2", r.sigma2},
                   {"metric", r.metric},
                   {"median", r.median},
                   {"q1", r.q1},
                   {"q3", r.q3},
                   {"replications", r.replications}});
  out << arr.dump(2) << '\n';
}

}  // namespace robrsvd::sim
