#include "gradstop/experiment.hpp"

#include "gradstop/baselines.hpp"
#include "gradstop/criterion.hpp"
#include "gradstop/models.hpp"
#include "gradstop/numstats.hpp"
#include "gradstop/oracle.hpp"

#include "json.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <random>

namespace gradstop::experiment {
namespace {

using nlohmann::json;

enum Stream : std::uint64_t {
  kModelStream = 1,
  kInitStream,
  kDataStream,
  kSplitStream,
  kGdSplitStream,
  kGradstopStream,
  kMcmcStream,
  kTuneStream,
};

// ---- config ---------------------------------------------------------------

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

// nlohmann converts negative numbers to unsigned silently.
template <typename T>
void read_count(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  out = static_cast<T>(v.get<std::int64_t>());
}

std::string_view model_name(ModelType m) { return m == ModelType::Quadratic ? "quadratic" : "logistic"; }
std::string_view rule_name(ValidationRule r) { return r == ValidationRule::Argmin ? "argmin" : "patience"; }

// ---- formatting -----------------------------------------------------------

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// ---- problem construction -------------------------------------------------

struct LogisticParts {
  std::unique_ptr<models::LogisticModel> test;
  // Holdout run for the validation criterion.
  std::unique_ptr<models::LogisticModel> holdout_train;
  std::unique_ptr<models::LogisticModel> holdout_val;
  std::unique_ptr<models::LogisticModel> holdout_test;
};

struct Problem {
  std::unique_ptr<models::LossModel> model;
  const models::QuadraticModel* quadratic = nullptr;
  const models::LogisticModel* logistic = nullptr;
  std::optional<oracle::PosteriorOracle> posterior;
  LogisticParts parts;
  Vector theta0;
  std::vector<std::string> names;
};

std::unique_ptr<models::LogisticModel> logistic_on(const RowMatrix& x, const std::vector<int>& labels,
                                                   std::span<const std::size_t> rows, double lambda) {
  const auto y = data::select_labels(labels, rows);
  return std::make_unique<models::LogisticModel>(data::select_rows(x, rows), y, lambda);
}

Problem build_problem(const RunConfig& cfg, std::uint64_t seed) {
  Problem p;
  if (cfg.model == ModelType::Quadratic) {
    const auto& q = cfg.quadratic;
    const auto spectrum = models::log_spaced_spectrum(q.d, q.spectrum_lo, q.spectrum_hi);
    auto m = std::make_unique<models::QuadraticModel>(
        models::QuadraticModel::make(q.d, q.n, spectrum, derive_seed(seed, kModelStream)));
    p.posterior = oracle::PosteriorOracle::of(*m);
    std::mt19937_64 rng(derive_seed(seed, kInitStream));
    std::normal_distribution<double> normal;
    p.theta0 = m->theta_star();
    for (Eigen::Index j = 0; j < p.theta0.size(); ++j) p.theta0(j) += q.init_scale * normal(rng);
    for (std::size_t j = 0; j < q.d; ++j) p.names.push_back("theta" + std::to_string(j));
    p.quadratic = m.get();
    p.model = std::move(m);
    return p;
  }

  const auto& l = cfg.logistic;
  data::Dataset raw;
  if (l.dataset.empty()) {
    auto spec = l.synthetic;
    spec.seed = derive_seed(seed, kDataStream);
    raw = data::make_synthetic(spec);
  } else {
    raw = data::load_csv(l.dataset, l.label_column, l.positive_label);
  }
  const bool with_val = cfg.validation.enabled;
  data::Fractions f;
  f.test = cfg.test_fraction;
  f.val = with_val ? (1.0 - cfg.test_fraction) * cfg.validation_fraction : 0.0;
  f.train = 1.0 - f.test - f.val;
  const auto sr = data::split_standardize(raw, f, derive_seed(seed, kSplitStream));
  const auto& split = sr.split;

  // The main run trains on every non-test row, standardized on those rows.
  std::vector<std::size_t> main_rows = split.train_idx;
  main_rows.insert(main_rows.end(), split.val_idx.begin(), split.val_idx.end());
  const auto s_main = data::fit_standardization(raw.features, main_rows);
  const RowMatrix x_main = data::apply_standardization(raw.features, s_main);
  auto model = logistic_on(x_main, raw.labels, main_rows, l.prior_precision);
  p.parts.test = logistic_on(x_main, raw.labels, split.test_idx, 0.0);
  if (with_val) {
    const auto& x = sr.standardized.features;
    p.parts.holdout_train = logistic_on(x, raw.labels, split.train_idx, l.prior_precision);
    p.parts.holdout_val = logistic_on(x, raw.labels, split.val_idx, 0.0);
    p.parts.holdout_test = logistic_on(x, raw.labels, split.test_idx, 0.0);
  }
  p.theta0 = Vector::Zero(static_cast<Eigen::Index>(model->dim()));
  p.names = raw.feature_names;
  p.names.emplace_back("bias");
  p.logistic = model.get();
  p.model = std::move(model);
  return p;
}

// ---- per-iteration statistics ---------------------------------------------

void gradient_statistics(const RunConfig& cfg, const GradientMatrix& g,
                         const std::optional<baselines::GdSplit>& gd_split, TraceRecord& rec) {
  try {
    const auto cv = criterion::credible_value(g, rec.t, cfg.kappa);
    rec.z = cv.z;
    rec.s_hat = cv.s_hat;
  } catch (const numstats::DegenerateCovariance& e) {
    spdlog::debug("t={}: {}", rec.t, e.what());
  }
  if (!cfg.baselines.enabled) return;
  rec.eb = baselines::stat_eb(g);
  rec.gsnr = baselines::stat_gsnr(g);
  rec.sign = baselines::stat_sign(g);
  rec.cos = baselines::stat_cos(g);
  if (gd_split) rec.gd = baselines::stat_gd(g, *gd_split);
}

Outcome outcome_at(const SeedRun& run, const std::string& name, std::int64_t t, bool fired) {
  const auto& r = run.trace.at(static_cast<std::size_t>(t - 1));
  return {name, run.seed, t, fired, r.train_loss, r.test_loss, r.test_accuracy, r.exact_s};
}

Outcome gradstop_outcome(const SeedRun& run, const criterion::StopMode& mode) {
  criterion::StopController ctl(mode);
  for (const auto& r : run.trace) {
    if (!r.s_hat) continue;
    const auto d = ctl.observe({}, {*r.s_hat, r.z.value_or(0.0), r.t});
    if (d == criterion::Decision::Stop) break;
  }
  const auto best = ctl.best_iteration();
  const auto t_end = static_cast<std::int64_t>(run.trace.size());
  return outcome_at(run, "gradstop", best ? *best : t_end, best.has_value());
}

Outcome baseline_outcome(const SeedRun& run, baselines::Kind kind, int patience,
                         std::optional<double> TraceRecord::*field) {
  baselines::BaselineStopRule rule(kind, patience);
  std::optional<double> prev;
  for (const auto& r : run.trace) {
    const auto& cur = r.*field;
    if (!cur) continue;
    if (rule.step(prev, *cur) == baselines::Decision::Stop) {
      return outcome_at(run, std::string(baselines::kind_name(kind)), r.t, true);
    }
    prev = cur;
  }
  return outcome_at(run, std::string(baselines::kind_name(kind)),
                    static_cast<std::int64_t>(run.trace.size()), false);
}

Outcome validation_outcome(const SeedRun& run, const ValidationSpec& v) {
  std::int64_t pick = static_cast<std::int64_t>(run.trace.size());
  bool fired = false;
  if (v.rule == ValidationRule::Argmin) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : run.trace) {
      if (r.validation_loss && *r.validation_loss < best) {
        best = *r.validation_loss;
        pick = r.t;
        fired = true;
      }
    }
  } else {
    int increases = 0;
    std::optional<double> prev;
    for (const auto& r : run.trace) {
      if (!r.validation_loss) continue;
      if (prev && *r.validation_loss > *prev && ++increases >= v.patience) {
        pick = r.t;
        fired = true;
        break;
      }
      prev = r.validation_loss;
    }
  }
  const auto& r = run.trace.at(static_cast<std::size_t>(pick - 1));
  return {"validation", run.seed, pick, fired, std::nullopt, r.holdout_test_loss,
          r.holdout_test_accuracy, std::nullopt};
}

criterion::StopMode stop_mode(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.gradstop.stochastic) {
    return criterion::Stochastic{derive_seed(cfg.gradstop.seed ^ seed, kGradstopStream)};
  }
  return criterion::DeterministicThreshold{cfg.gradstop.u};
}

// ---- output writers ---------------------------------------------------------

void write_outcomes(const std::filesystem::path& path, const std::vector<Outcome>& rows,
                    const std::vector<double>* u_values = nullptr) {
  auto out = open_out(path);
  out << (u_values ? "u," : "") << "criterion,seed,iteration,fired,train_loss,test_loss,test_accuracy,exact_s\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& o = rows[i];
    if (u_values) out << num((*u_values)[i]) << ',';
    out << o.criterion << ',' << o.seed << ',' << o.iteration << ',' << (o.fired ? 1 : 0) << ','
        << num(o.train_loss) << ',' << num(o.test_loss) << ',' << num(o.test_accuracy) << ','
        << num(o.exact_s) << '\n';
  }
}

void write_stats(const std::filesystem::path& path, const std::vector<CriterionStats>& stats,
                 std::string_view key = "criterion") {
  auto out = open_out(path);
  out << key
      << ",runs,fired_fraction,mean_iteration,mean_test_loss,std_test_loss,mean_test_accuracy,"
         "std_test_accuracy,mean_exact_s\n";
  for (const auto& s : stats) {
    out << s.criterion << ',' << s.runs << ',' << num(s.fired_fraction) << ','
        << num(s.mean_iteration) << ',' << num(s.mean_test_loss) << ',' << num(s.std_test_loss)
        << ',' << num(s.mean_test_accuracy) << ',' << num(s.std_test_accuracy) << ','
        << num(s.mean_exact_s) << '\n';
  }
}

json stats_json(const std::vector<CriterionStats>& stats) {
  json arr = json::array();
  for (const auto& s : stats) {
    arr.push_back({{"criterion", s.criterion},
                   {"runs", s.runs},
                   {"fired_fraction", s.fired_fraction},
                   {"mean_iteration", s.mean_iteration},
                   {"mean_test_loss", opt_json(s.mean_test_loss)},
                   {"std_test_loss", opt_json(s.std_test_loss)},
                   {"mean_test_accuracy", opt_json(s.mean_test_accuracy)},
                   {"std_test_accuracy", opt_json(s.std_test_accuracy)},
                   {"mean_exact_s", opt_json(s.mean_exact_s)}});
  }
  return arr;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void prepare_out(const RunConfig& cfg, const std::filesystem::path& out) {
  cfg.validate();
  std::filesystem::create_directories(out);
  auto f = open_out(out / "config.json");
  f << dump_config(cfg) << '\n';
}

std::vector<std::uint64_t> seed_list(const RunConfig& cfg) {
  std::vector<std::uint64_t> s;
  for (std::size_t k = 0; k < cfg.seeds; ++k) s.push_back(cfg.seed + k);
  return s;
}

std::filesystem::path seed_dir(const std::filesystem::path& out, std::uint64_t seed) {
  auto dir = out / ("seed_" + std::to_string(seed));
  std::filesystem::create_directories(dir);
  return dir;
}

struct MeanStd {
  std::optional<double> mean;
  std::optional<double> std;
};

MeanStd mean_std(const std::vector<double>& v) {
  if (v.empty()) return {};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return {m, sd};
}

}  // namespace

// ---- config ---------------------------------------------------------------

void RunConfig::validate() const {
  if (budget < 1) throw ConfigError("budget must be >= 1");
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be positive");
  if (!(gradstop.u >= 0.0 && gradstop.u <= 1.0)) throw ConfigError("gradstop.u must lie in [0, 1]");
  if (baselines.patience < 1 || validation.patience < 1) throw ConfigError("patience must be >= 1");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) throw ConfigError("split.test must lie in [0, 1)");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("split.validation must lie in (0, 1)");
  }
  for (double u : sweep_u) {
    if (!(u >= 0.0 && u <= 1.0)) throw ConfigError("sweep u values must lie in [0, 1]");
  }
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (model == ModelType::Quadratic) {
    const auto& q = quadratic;
    if (q.d < 1 || q.n < 2) throw ConfigError("quadratic model needs d >= 1 and n >= 2");
    if (!(q.spectrum_lo > 0.0) || !(q.spectrum_hi >= q.spectrum_lo)) {
      throw ConfigError("quadratic spectrum must satisfy 0 < lo <= hi");
    }
    if (!(q.init_scale >= 0.0)) throw ConfigError("quadratic.init_scale must be >= 0");
  } else {
    if (!(logistic.prior_precision >= 0.0)) throw ConfigError("prior_precision must be >= 0");
    if (logistic.dataset.empty() && (logistic.synthetic.n < 4 || logistic.synthetic.informative < 1)) {
      throw ConfigError("synthetic data needs n >= 4 and informative >= 1");
    }
  }
  if (mcmc.samples > 0 && (mcmc.thin < 1 || mcmc.samples < 2 * mcmc.thin)) {
    throw ConfigError("mcmc.samples must hold at least two thinned draws");
  }
  if (mcmc.step_scale < 0.0) throw ConfigError("mcmc.step_scale must be >= 0");
}

RunConfig quadratic_preset() {
  RunConfig c;
  c.model = ModelType::Quadratic;
  c.optimizer.method = optim::Method::GD;
  c.optimizer.learning_rate = 1e-2;
  c.budget = 3000;
  c.validation.enabled = false;
  return c;
}

RunConfig logistic_preset() {
  RunConfig c;
  c.model = ModelType::Logistic;
  c.optimizer.method = optim::Method::Adam;
  c.optimizer.learning_rate = 0.1;
  c.budget = 4000;
  c.seeds = 10;
  return c;
}

RunConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"model", "quadratic", "logistic", "optimizer", "budget", "kappa", "seed", "seeds",
              "split", "gradstop", "baselines", "validation", "sweep", "mcmc"},
             "config");

  std::string model = "quadratic";
  read(j, "model", model, "config");
  RunConfig c;
  if (model == "quadratic") {
    c = quadratic_preset();
  } else if (model == "logistic") {
    c = logistic_preset();
  } else {
    throw ConfigError("model must be 'quadratic' or 'logistic'");
  }

  if (j.contains("quadratic")) {
    const auto& q = j["quadratic"];
    check_keys(q, {"d", "n", "spectrum_lo", "spectrum_hi", "init_scale"}, "quadratic");
    read_count(q, "d", c.quadratic.d, "quadratic");
    read_count(q, "n", c.quadratic.n, "quadratic");
    read(q, "spectrum_lo", c.quadratic.spectrum_lo, "quadratic");
    read(q, "spectrum_hi", c.quadratic.spectrum_hi, "quadratic");
    read(q, "init_scale", c.quadratic.init_scale, "quadratic");
  }
  if (j.contains("logistic")) {
    const auto& l = j["logistic"];
    check_keys(l, {"dataset", "label_column", "positive_label", "prior_precision", "synthetic"},
               "logistic");
    read(l, "dataset", c.logistic.dataset, "logistic");
    read(l, "label_column", c.logistic.label_column, "logistic");
    read(l, "positive_label", c.logistic.positive_label, "logistic");
    read(l, "prior_precision", c.logistic.prior_precision, "logistic");
    if (l.contains("synthetic")) {
      const auto& s = l["synthetic"];
      auto& t = c.logistic.synthetic;
      check_keys(s,
                 {"n", "informative", "redundant", "noise", "redundant_mix", "redundant_jitter",
                  "weight_scale"},
                 "logistic.synthetic");
      read_count(s, "n", t.n, "logistic.synthetic");
      read_count(s, "informative", t.informative, "logistic.synthetic");
      read_count(s, "redundant", t.redundant, "logistic.synthetic");
      read_count(s, "noise", t.noise, "logistic.synthetic");
      read(s, "redundant_mix", t.redundant_mix, "logistic.synthetic");
      read(s, "redundant_jitter", t.redundant_jitter, "logistic.synthetic");
      read(s, "weight_scale", t.weight_scale, "logistic.synthetic");
    }
  }
  if (j.contains("optimizer")) {
    const auto& o = j["optimizer"];
    check_keys(o, {"method", "learning_rate", "beta1", "beta2", "eps"}, "optimizer");
    if (o.contains("method")) {
      std::string m;
      read(o, "method", m, "optimizer");
      try {
        c.optimizer.method = optim::parse_method(m);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    read(o, "learning_rate", c.optimizer.learning_rate, "optimizer");
    read(o, "beta1", c.optimizer.beta1, "optimizer");
    read(o, "beta2", c.optimizer.beta2, "optimizer");
    read(o, "eps", c.optimizer.eps, "optimizer");
  }
  if (j.contains("budget")) {
    const auto& b = j["budget"];
    if (!b.is_number_integer()) throw ConfigError("budget must be an integer");
    c.budget = b.get<std::int64_t>();
  }
  read(j, "kappa", c.kappa, "config");
  read_count(j, "seed", c.seed, "config");
  read_count(j, "seeds", c.seeds, "config");
  if (j.contains("split")) {
    const auto& s = j["split"];
    check_keys(s, {"test", "validation"}, "split");
    read(s, "test", c.test_fraction, "split");
    read(s, "validation", c.validation_fraction, "split");
  }
  if (j.contains("gradstop")) {
    const auto& g = j["gradstop"];
    check_keys(g, {"mode", "u", "seed"}, "gradstop");
    std::string mode = c.gradstop.stochastic ? "stochastic" : "deterministic";
    read(g, "mode", mode, "gradstop");
    if (mode != "stochastic" && mode != "deterministic") {
      throw ConfigError("gradstop.mode must be 'deterministic' or 'stochastic'");
    }
    c.gradstop.stochastic = mode == "stochastic";
    read(g, "u", c.gradstop.u, "gradstop");
    read_count(g, "seed", c.gradstop.seed, "gradstop");
  }
  if (j.contains("baselines")) {
    const auto& b = j["baselines"];
    check_keys(b, {"enabled", "patience"}, "baselines");
    read(b, "enabled", c.baselines.enabled, "baselines");
    read(b, "patience", c.baselines.patience, "baselines");
  }
  if (j.contains("validation")) {
    const auto& v = j["validation"];
    check_keys(v, {"enabled", "rule", "patience"}, "validation");
    read(v, "enabled", c.validation.enabled, "validation");
    std::string rule(rule_name(c.validation.rule));
    read(v, "rule", rule, "validation");
    if (rule != "argmin" && rule != "patience") {
      throw ConfigError("validation.rule must be 'argmin' or 'patience'");
    }
    c.validation.rule = rule == "argmin" ? ValidationRule::Argmin : ValidationRule::Patience;
    read(v, "patience", c.validation.patience, "validation");
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, {"u"}, "sweep");
    read(s, "u", c.sweep_u, "sweep");
  }
  if (j.contains("mcmc")) {
    const auto& m = j["mcmc"];
    check_keys(m, {"samples", "burn_in", "thin", "step_scale"}, "mcmc");
    read_count(m, "samples", c.mcmc.samples, "mcmc");
    read_count(m, "burn_in", c.mcmc.burn_in, "mcmc");
    read_count(m, "thin", c.mcmc.thin, "mcmc");
    read(m, "step_scale", c.mcmc.step_scale, "mcmc");
  }
  c.validate();
  return c;
}

std::string dump_config(const RunConfig& c) {
  const auto& s = c.logistic.synthetic;
  json j = {
      {"model", model_name(c.model)},
      {"quadratic",
       {{"d", c.quadratic.d},
        {"n", c.quadratic.n},
        {"spectrum_lo", c.quadratic.spectrum_lo},
        {"spectrum_hi", c.quadratic.spectrum_hi},
        {"init_scale", c.quadratic.init_scale}}},
      {"logistic",
       {{"dataset", c.logistic.dataset},
        {"label_column", c.logistic.label_column},
        {"positive_label", c.logistic.positive_label},
        {"prior_precision", c.logistic.prior_precision},
        {"synthetic",
         {{"n", s.n},
          {"informative", s.informative},
          {"redundant", s.redundant},
          {"noise", s.noise},
          {"redundant_mix", s.redundant_mix},
          {"redundant_jitter", s.redundant_jitter},
          {"weight_scale", s.weight_scale}}}}},
      {"optimizer",
       {{"method", optim::method_name(c.optimizer.method)},
        {"learning_rate", c.optimizer.learning_rate},
        {"beta1", c.optimizer.beta1},
        {"beta2", c.optimizer.beta2},
        {"eps", c.optimizer.eps}}},
      {"budget", c.budget},
      {"kappa", c.kappa},
      {"seed", c.seed},
      {"seeds", c.seeds},
      {"split", {{"test", c.test_fraction}, {"validation", c.validation_fraction}}},
      {"gradstop",
       {{"mode", c.gradstop.stochastic ? "stochastic" : "deterministic"},
        {"u", c.gradstop.u},
        {"seed", c.gradstop.seed}}},
      {"baselines", {{"enabled", c.baselines.enabled}, {"patience", c.baselines.patience}}},
      {"validation",
       {{"enabled", c.validation.enabled},
        {"rule", rule_name(c.validation.rule)},
        {"patience", c.validation.patience}}},
      {"sweep", {{"u", c.sweep_u}}},
      {"mcmc",
       {{"samples", c.mcmc.samples},
        {"burn_in", c.mcmc.burn_in},
        {"thin", c.mcmc.thin},
        {"step_scale", c.mcmc.step_scale}}},
  };
  return j.dump(2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// ---- runs -----------------------------------------------------------------

SeedRun run_seed(const RunConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Problem p = build_problem(cfg, seed);
  SeedRun run;
  run.seed = seed;
  run.parameter_names = p.names;
  run.trace.reserve(static_cast<std::size_t>(cfg.budget));

  std::optional<baselines::GdSplit> gd_split;
  if (cfg.baselines.enabled && p.model->n_samples() >= 4) {
    gd_split = baselines::make_gd_split(p.model->n_samples(), derive_seed(seed, kGdSplitStream));
  }

  const optim::Observer record = [&](const optim::Observation& o) {
    TraceRecord rec;
    rec.t = o.t;
    if (p.logistic) {
      rec.train_loss = p.logistic->mean_log_loss(o.theta);
      rec.test_loss = p.parts.test->mean_log_loss(o.theta);
      rec.test_accuracy = p.parts.test->accuracy(o.theta);
    } else {
      rec.train_loss = o.train_loss;
      rec.exact_s = p.posterior->exact_credibility(o.theta);
    }
    gradient_statistics(cfg, o.gradients, gd_split, rec);
    run.trace.push_back(rec);
  };
  const auto state = optim::run(*p.model, p.theta0, cfg.optimizer, cfg.budget, {&record, 1});
  run.final_theta = state.theta;

  const bool with_val = p.logistic && cfg.validation.enabled;
  if (with_val) {
    const optim::Observer holdout = [&](const optim::Observation& o) {
      auto& rec = run.trace.at(static_cast<std::size_t>(o.t - 1));
      rec.validation_loss = p.parts.holdout_val->mean_log_loss(o.theta);
      rec.holdout_test_loss = p.parts.holdout_test->mean_log_loss(o.theta);
      rec.holdout_test_accuracy = p.parts.holdout_test->accuracy(o.theta);
    };
    optim::run(*p.parts.holdout_train, Vector::Zero(p.theta0.size()), cfg.optimizer, cfg.budget,
               {&holdout, 1});
  }

  run.outcomes.push_back(gradstop_outcome(run, stop_mode(cfg, seed)));
  if (cfg.baselines.enabled) {
    const int pat = cfg.baselines.patience;
    run.outcomes.push_back(baseline_outcome(run, baselines::Kind::EB, pat, &TraceRecord::eb));
    run.outcomes.push_back(baseline_outcome(run, baselines::Kind::GSNR, pat, &TraceRecord::gsnr));
    run.outcomes.push_back(baseline_outcome(run, baselines::Kind::Sign, pat, &TraceRecord::sign));
    run.outcomes.push_back(baseline_outcome(run, baselines::Kind::Cos, pat, &TraceRecord::cos));
    if (gd_split) {
      run.outcomes.push_back(baseline_outcome(run, baselines::Kind::GD, pat, &TraceRecord::gd));
    }
  }
  if (with_val) run.outcomes.push_back(validation_outcome(run, cfg.validation));
  run.outcomes.push_back(outcome_at(run, "end", static_cast<std::int64_t>(run.trace.size()), true));
  return run;
}

Outcome threshold_outcome(const SeedRun& run, double u) {
  return gradstop_outcome(run, criterion::DeterministicThreshold{u});
}

std::vector<CriterionStats> summarize(const std::vector<Outcome>& outcomes) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Outcome*>> groups;
  for (const auto& o : outcomes) {
    if (!groups.count(o.criterion)) order.push_back(o.criterion);
    groups[o.criterion].push_back(&o);
  }
  std::vector<CriterionStats> stats;
  for (const auto& name : order) {
    const auto& g = groups[name];
    CriterionStats s;
    s.criterion = name;
    s.runs = g.size();
    std::vector<double> loss, acc, exact;
    double fired = 0.0, iters = 0.0;
    for (const auto* o : g) {
      fired += o->fired ? 1.0 : 0.0;
      iters += static_cast<double>(o->iteration);
      if (o->test_loss) loss.push_back(*o->test_loss);
      if (o->test_accuracy) acc.push_back(*o->test_accuracy);
      if (o->exact_s) exact.push_back(*o->exact_s);
    }
    s.fired_fraction = fired / static_cast<double>(g.size());
    s.mean_iteration = iters / static_cast<double>(g.size());
    const auto l = mean_std(loss);
    const auto a = mean_std(acc);
    s.mean_test_loss = l.mean;
    s.std_test_loss = l.std;
    s.mean_test_accuracy = a.mean;
    s.std_test_accuracy = a.std;
    s.mean_exact_s = mean_std(exact).mean;
    stats.push_back(std::move(s));
  }
  return stats;
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& trace) {
  auto out = open_out(path);
  out << "t,train_loss,test_loss,test_accuracy,validation_loss,holdout_test_loss,"
         "holdout_test_accuracy,z,s_hat,exact_s,eb,gsnr,sign,cos,gd\n";
  for (const auto& r : trace) {
    out << r.t << ',' << num(r.train_loss) << ',' << num(r.test_loss) << ','
        << num(r.test_accuracy) << ',' << num(r.validation_loss) << ','
        << num(r.holdout_test_loss) << ',' << num(r.holdout_test_accuracy) << ',' << num(r.z)
        << ',' << num(r.s_hat) << ',' << num(r.exact_s) << ',' << num(r.eb) << ','
        << num(r.gsnr) << ',' << num(r.sign) << ',' << num(r.cos) << ',' << num(r.gd) << '\n';
  }
}

UncertaintyReport uncertainty_report(const RunConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Problem p = build_problem(cfg, seed);
  const auto state = optim::run(*p.model, p.theta0, cfg.optimizer, cfg.budget, {});
  const Vector& theta = state.theta;
  const GradientMatrix g = p.model->sample_gradients(as_span(theta));
  const Vector sigma = criterion::parameter_uncertainty(g, cfg.kappa);

  UncertaintyReport rep;
  std::optional<Vector> mcmc_sd;
  if (cfg.mcmc.samples > 0) {
    double scale = cfg.mcmc.step_scale;
    if (scale == 0.0) {
      const double guess = 2.38 / std::sqrt(static_cast<double>(theta.size())) * sigma.mean();
      scale = oracle::tune_step_scale(*p.model, theta, guess > 0.0 ? guess : 0.1,
                                      derive_seed(seed, kTuneStream));
    }
    oracle::McmcOptions opt;
    opt.n_samples = cfg.mcmc.samples;
    opt.burn_in = cfg.mcmc.burn_in;
    opt.thin = cfg.mcmc.thin;
    opt.step_scale = scale;
    opt.seed = derive_seed(seed, kMcmcStream);
    const auto chain = oracle::mcmc_run(*p.model, theta, opt);
    mcmc_sd = chain.stddev();
    rep.acceptance_rate = chain.acceptance_rate;
    rep.step_scale = chain.step_scale;
    rep.tuning_warning = chain.tuning_warning;
  }
  std::optional<Vector> exact_sd;
  if (p.posterior) exact_sd = p.posterior->marginal_std();

  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    UncertaintyRow row;
    row.parameter = p.names.at(static_cast<std::size_t>(j));
    row.theta = theta(j);
    row.sigma_gradstop = sigma(j);
    if (mcmc_sd) row.sigma_mcmc = (*mcmc_sd)(j);
    if (exact_sd) row.sigma_exact = (*exact_sd)(j);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---- commands -------------------------------------------------------------

RunReport cmd_run(const RunConfig& cfg, const std::filesystem::path& out) {
  prepare_out(cfg, out);
  RunReport rep;
  for (const auto seed : seed_list(cfg)) {
    auto run = run_seed(cfg, seed);
    write_trace(seed_dir(out, seed) / "trace.csv", run.trace);
    rep.outcomes.insert(rep.outcomes.end(), run.outcomes.begin(), run.outcomes.end());
    spdlog::info("seed {}: gradstop stop at t={} of {}", seed, run.outcomes.front().iteration,
                 cfg.budget);
    rep.runs.push_back(std::move(run));
  }
  rep.stats = summarize(rep.outcomes);
  write_outcomes(out / "summary.csv", rep.outcomes);
  write_stats(out / "summary_stats.csv", rep.stats);
  write_json(out / "summary.json",
             {{"model", model_name(cfg.model)}, {"seeds", seed_list(cfg)}, {"criteria", stats_json(rep.stats)}});
  return rep;
}

SweepReport cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
  if (cfg.sweep_u.empty()) throw ConfigError("sweep needs at least one u value");
  prepare_out(cfg, out);
  SweepReport rep;
  rep.u_values = cfg.sweep_u;
  std::vector<SeedRun> runs;
  for (const auto seed : seed_list(cfg)) {
    runs.push_back(run_seed(cfg, seed));
    write_trace(seed_dir(out, seed) / "trace.csv", runs.back().trace);
  }
  std::vector<Outcome> flat;
  std::vector<double> flat_u;
  for (double u : cfg.sweep_u) {
    std::vector<Outcome> group;
    for (const auto& run : runs) {
      auto o = threshold_outcome(run, u);
      rep.rows.push_back({u, o});
      flat.push_back(o);
      flat_u.push_back(u);
      group.push_back(std::move(o));
    }
    auto s = summarize(group).front();
    s.criterion = num(u);
    rep.stats.push_back(std::move(s));
  }
  write_outcomes(out / "sweep.csv", flat, &flat_u);
  write_stats(out / "sweep_stats.csv", rep.stats, "u");
  write_json(out / "sweep.json", {{"model", model_name(cfg.model)}, {"seeds", seed_list(cfg)},
                                  {"u", cfg.sweep_u}, {"stats", stats_json(rep.stats)}});
  return rep;
}

UncertaintyReport cmd_uncertainty(const RunConfig& cfg, const std::filesystem::path& out) {
  prepare_out(cfg, out);
  auto rep = uncertainty_report(cfg, cfg.seed);
  auto f = open_out(out / "uncertainty.csv");
  f << "parameter,theta,sigma_gradstop,sigma_mcmc,sigma_exact\n";
  for (const auto& r : rep.rows) {
    f << r.parameter << ',' << num(r.theta) << ',' << num(r.sigma_gradstop) << ','
      << num(r.sigma_mcmc) << ',' << num(r.sigma_exact) << '\n';
  }
  write_json(out / "uncertainty.json", {{"model", model_name(cfg.model)},
                                        {"seed", cfg.seed},
                                        {"kappa", cfg.kappa},
                                        {"acceptance_rate", opt_json(rep.acceptance_rate)},
                                        {"step_scale", opt_json(rep.step_scale)},
                                        {"tuning_warning", rep.tuning_warning}});
  if (rep.tuning_warning) spdlog::warn("MCMC acceptance rate outside [0.1, 0.6]; see uncertainty.json");
  return rep;
}

}  // namespace gradstop::experiment
