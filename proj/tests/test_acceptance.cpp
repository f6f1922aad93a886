// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
// Exits non-zero if any criterion fails, except those listed with
// --known-red (still reported as FAIL).

#include "gradstop/criterion.hpp"
#include "gradstop/data.hpp"
#include "gradstop/experiment.hpp"
#include "gradstop/models.hpp"
#include "gradstop/numstats.hpp"
#include "gradstop/oracle.hpp"

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gradstop;
namespace ex = gradstop::experiment;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RowMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

models::QuadraticModel preset_model(std::size_t n, std::uint64_t seed) {
  const auto q = ex::quadratic_preset().quadratic;
  return models::QuadraticModel::make(q.d, n, models::log_spaced_spectrum(q.d, q.spectrum_lo, q.spectrum_hi),
                                      seed);
}

double mean_of(const std::vector<ex::Outcome>& v) {
  double s = 0.0;
  for (const auto& o : v) s += *o.test_loss;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<ex::Outcome>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (const auto& o : v) s += (*o.test_loss - m) * (*o.test_loss - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Verdict credibility_accuracy() {
  auto cfg = ex::quadratic_preset();
  cfg.baselines.enabled = false;
  const auto run = ex::run_seed(cfg, cfg.seed);
  double err = 0.0;
  std::size_t count = 0;
  for (const auto& r : run.trace) {
    if (!r.s_hat || *r.exact_s < 0.01 || *r.exact_s > 0.99) continue;
    err += std::abs(*r.s_hat - *r.exact_s);
    ++count;
  }
  if (count == 0) return {false, "no iterations with exact s in [0.01, 0.99]"};
  const double mae = err / static_cast<double>(count);
  return {mae <= 0.05, fmt("MAE %.4f over %zu iterations (tol 0.05)", mae, count)};
}

Verdict uniformity() {
  const auto m = preset_model(200, ex::derive_seed(0, 1));
  const auto o = oracle::PosteriorOracle::of(m);
  std::mt19937_64 rng(ex::derive_seed(0, 7));
  std::vector<double> s;
  for (int k = 0; k < 2000; ++k) {
    const Vector th = o.exact_sample(rng);
    s.push_back(o.exact_credibility(as_span(th)));
  }
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    d = std::max({d, (static_cast<double>(i) + 1) / n - s[i], s[i] - static_cast<double>(i) / n});
  }
  const double crit = 1.628 / std::sqrt(n);
  return {d < crit, fmt("KS D %.4f (1%% critical %.4f)", d, crit)};
}

Verdict woodbury_direct() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(2, 20);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto g = GradientMatrix(random_matrix(size(rng), size(rng), rng));
    const double zd = numstats::quad_stat(g, {numstats::InversionPath::Direct, std::nullopt}).z;
    const double zw = numstats::quad_stat(g, {numstats::InversionPath::Woodbury, std::nullopt}).z;
    worst = std::max(worst, std::abs(zd - zw) / std::max(std::abs(zd), 1e-300));
  }
  return {worst <= 1e-8, fmt("max relative difference %.3g over 200 matrices (tol 1e-8)", worst)};
}

Verdict hessian_covariance() {
  std::vector<double> errs;
  for (std::size_t n : {50u, 500u, 5000u}) {
    const auto m = preset_model(n, 4);
    const auto g = m.sample_gradients(as_span(m.theta_star()));
    const Eigen::MatrixXd sigma = numstats::covariance(numstats::mean_and_centered(g).centered);
    errs.push_back((static_cast<double>(n) * sigma - m.hessian()).norm() / m.hessian().norm());
  }
  const bool ok = errs[1] <= errs[0] && errs[2] <= errs[1] && errs[2] < 0.1;
  return {ok, fmt("relative Frobenius error %.4f, %.4f, %.4f at n = 50, 500, 5000 (non-increasing, last < 0.1)",
                  errs[0], errs[1], errs[2])};
}

Verdict gaussian_uncertainty() {
  auto cfg = ex::quadratic_preset();
  cfg.mcmc.samples = 0;
  const auto one = ex::uncertainty_report(cfg, cfg.seed);
  cfg.kappa = 2.0;
  const auto two = ex::uncertainty_report(cfg, cfg.seed);
  double worst = 0.0, worst_law = 0.0, lo = 1e300, hi = 0.0;
  for (std::size_t j = 0; j < one.rows.size(); ++j) {
    const double ratio = one.rows[j].sigma_gradstop / *one.rows[j].sigma_exact;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    worst = std::max(worst, std::abs(ratio - 1.0));
    const double expect = one.rows[j].sigma_gradstop / std::sqrt(2.0);
    worst_law = std::max(worst_law, std::abs(two.rows[j].sigma_gradstop - expect) / expect);
  }
  return {worst <= 0.25 && worst_law <= 1e-10,
          fmt("sigma / exact in [%.3f, %.3f], max relative error %.3f (tol 0.25); kappa law error %.2g (tol 1e-10)",
              lo, hi, worst, worst_law)};
}

double fd_error(const models::LossModel& m, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, m.n_samples() - 1);
  const auto d = static_cast<Eigen::Index>(m.dim());
  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Vector theta = scale * random_matrix(d, 1, rng).col(0);
    const std::size_t i = pick(rng);
    const auto g = m.sample_gradients(as_span(theta));
    Vector fd(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      Vector tp = theta, tm = theta;
      tp(j) += h;
      tm(j) -= h;
      fd(j) = (m.sample_loss(i, as_span(tp)) - m.sample_loss(i, as_span(tm))) / (2 * h);
    }
    const Eigen::Map<const Vector> row(g.row(i).data(), d);
    worst = std::max(worst, (fd - row).norm() / std::max(row.norm(), 1e-8));
  }
  return worst;
}

Verdict gradients() {
  const auto q = preset_model(200, 5);
  const auto ds = data::make_synthetic(ex::logistic_preset().logistic.synthetic);
  std::vector<std::size_t> all(ds.n());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto x = data::apply_standardization(ds.features, data::fit_standardization(ds.features, all));
  const models::LogisticModel l(x, ds.labels, 0.3);
  const double eq = fd_error(q, 6, 2.0);
  const double el = fd_error(l, 7, 0.5);
  return {eq <= 1e-4 && el <= 1e-4,
          fmt("worst relative error quadratic %.2g, logistic %.2g over 50 probes each (tol 1e-4)", eq, el)};
}

struct LogisticRuns {
  std::vector<ex::SeedRun> runs;
};

const LogisticRuns& overfitting_runs() {
  static const LogisticRuns cache = [] {
    auto cfg = ex::logistic_preset();
    cfg.baselines.enabled = false;
    LogisticRuns r;
    for (std::size_t k = 0; k < cfg.seeds; ++k) r.runs.push_back(ex::run_seed(cfg, cfg.seed + k));
    return r;
  }();
  return cache;
}

std::vector<ex::Outcome> outcomes_named(const std::string& name) {
  std::vector<ex::Outcome> out;
  for (const auto& run : overfitting_runs().runs) {
    for (const auto& o : run.outcomes) {
      if (o.criterion == name) out.push_back(o);
    }
  }
  return out;
}

Verdict overfitting() {
  const double g = mean_of(outcomes_named("gradstop"));
  const double v = mean_of(outcomes_named("validation"));
  const double e = mean_of(outcomes_named("end"));
  return {g < e && std::abs(g - v) <= 0.15,
          fmt("mean test loss gradstop %.4f, validation %.4f, end %.4f (need gradstop < end, |gradstop - validation| <= 0.15)",
              g, v, e)};
}

Verdict mcmc_upper_bound() {
  auto cfg = ex::logistic_preset();
  auto& s = cfg.logistic.synthetic;
  s.n = 80;
  s.informative = 4;
  s.redundant = 15;
  s.noise = 0;
  s.redundant_jitter = 1.0;
  cfg.logistic.prior_precision = 1.0;
  cfg.validation.enabled = false;
  const auto rep = ex::uncertainty_report(cfg, cfg.seed);
  std::size_t above = 0;
  for (const auto& r : rep.rows) above += r.sigma_gradstop >= *r.sigma_mcmc;
  const double frac = static_cast<double>(above) / static_cast<double>(rep.rows.size());
  return {frac >= 0.9, fmt("%zu of %zu coordinates with sigma >= MCMC sigma (%.2f, need >= 0.90); acceptance %.3f",
                           above, rep.rows.size(), frac, *rep.acceptance_rate)};
}

Verdict threshold_robustness() {
  std::vector<double> means;
  double sd01 = 0.0;
  for (double u : {0.1, 0.2, 0.3, 0.4, 0.5}) {
    std::vector<ex::Outcome> group;
    for (const auto& run : overfitting_runs().runs) group.push_back(ex::threshold_outcome(run, u));
    means.push_back(mean_of(group));
    if (u == 0.1) sd01 = sd_of(group);
  }
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  const double spread = *hi - *lo;
  return {spread <= 2.0 * sd01,
          fmt("spread of mean test loss over u in {0.1..0.5} %.4f, seed sd at u=0.1 %.4f (need spread <= 2 sd)",
              spread, sd01)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  const auto root = std::filesystem::temp_directory_path() / "gradstop_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::size_t compared = 0;
  bool same = true;
  auto q = ex::quadratic_preset();
  q.gradstop.stochastic = true;
  q.budget = 500;
  auto l = ex::logistic_preset();
  l.seeds = 2;
  l.budget = 500;
  int k = 0;
  for (const auto& cfg : {q, l}) {
    const auto a = root / (std::to_string(k) + "a");
    const auto b = root / (std::to_string(k) + "b");
    ex::cmd_run(cfg, a);
    ex::cmd_run(cfg, b);
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
      const auto rel = std::filesystem::path("seed_" + std::to_string(cfg.seed + s)) / "trace.csv";
      const auto x = slurp(a / rel);
      same = same && !x.empty() && x == slurp(b / rel);
      ++compared;
    }
    ++k;
  }
  std::filesystem::remove_all(root);
  return {same, fmt("%zu trace.csv pairs %s", compared, same ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> known_red;
  app.add_option("--known-red", known_red, "Criteria whose failure does not fail the run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> tolerated(known_red.begin(), known_red.end());
  spdlog::set_level(spdlog::level::err);
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"credibility approximation", credibility_accuracy},
      {"uniformity of exact credibility", uniformity},
      {"woodbury equals direct", woodbury_direct},
      {"hessian-covariance consistency", hessian_covariance},
      {"gaussian uncertainty", gaussian_uncertainty},
      {"gradient correctness", gradients},
      {"overfitting prevention", overfitting},
      {"mcmc upper bound", mcmc_upper_bound},
      {"threshold robustness", threshold_robustness},
      {"determinism", determinism},
  };
  int failed = 0;
  int blocking = 0;
  int id = 1;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool red = !v.pass && tolerated.count(id);
    std::printf("%s criterion %d (%s): %s [%.1f s]%s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(),
                secs, red ? " (known red)" : "");
    std::fflush(stdout);
    failed += !v.pass;
    blocking += !v.pass && !red;
    ++id;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return blocking == 0 ? 0 : 1;
}
