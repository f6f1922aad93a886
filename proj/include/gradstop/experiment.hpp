#pragma once
// Experiment runner: builds a model from a RunConfig, trains it while every
// stopping criterion watches, and writes trace / summary files.

#include "gradstop/data.hpp"
#include "gradstop/gradient_matrix.hpp"
#include "gradstop/optim.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gradstop::experiment {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ModelType { Quadratic, Logistic };
enum class ValidationRule { Argmin, Patience };

struct QuadraticSpec {
  std::size_t d = 50;
  std::size_t n = 200;
  double spectrum_lo = 0.1;
  double spectrum_hi = 10.0;
  // theta_1 = theta* + init_scale * N(0, I)
  double init_scale = 3.0;
};

struct LogisticSpec {
  // Empty: use the synthetic generator.
  std::string dataset;
  std::string label_column = "label";
  std::string positive_label;
  double prior_precision = 1e-2;
  data::SyntheticSpec synthetic;
};

struct GradstopSpec {
  bool stochastic = false;
  double u = 0.1;
  std::uint64_t seed = 0;
};

struct BaselineSpec {
  bool enabled = true;
  int patience = 5;
};

struct ValidationSpec {
  bool enabled = true;
  ValidationRule rule = ValidationRule::Argmin;
  int patience = 5;
};

struct McmcSpec {
  std::size_t samples = 200000;
  std::size_t burn_in = 10000;
  std::size_t thin = 10;
  // 0 tunes the proposal scale with a pre-run.
  double step_scale = 0.0;
};

struct RunConfig {
  ModelType model = ModelType::Quadratic;
  QuadraticSpec quadratic;
  LogisticSpec logistic;
  optim::OptimizerConfig optimizer;
  std::int64_t budget = 3000;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  double test_fraction = 0.2;
  // Share of the non-test rows held out for the validation criterion.
  double validation_fraction = 0.2;
  GradstopSpec gradstop;
  BaselineSpec baselines;
  ValidationSpec validation;
  std::vector<double> sweep_u{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  McmcSpec mcmc;

  // Throws ConfigError.
  void validate() const;
};

// Missing keys take defaults; the optimizer defaults depend on the model
// (gradient descent with rate 1e-2 for the quadratic model, Adam with rate 0.1
// for logistic regression). Unknown keys are rejected. Throws ConfigError.
RunConfig parse_config(std::string_view json_text);
// Full configuration with every field written out.
std::string dump_config(const RunConfig& cfg);

RunConfig quadratic_preset();
RunConfig logistic_preset();

// Distinct child seed for a named purpose.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct TraceRecord {
  std::int64_t t = 0;
  double train_loss = 0.0;
  std::optional<double> test_loss;
  std::optional<double> test_accuracy;
  std::optional<double> validation_loss;
  std::optional<double> holdout_test_loss;
  std::optional<double> holdout_test_accuracy;
  std::optional<double> z;
  std::optional<double> s_hat;
  std::optional<double> exact_s;
  std::optional<double> eb;
  std::optional<double> gsnr;
  std::optional<double> sign;
  std::optional<double> cos;
  std::optional<double> gd;
};

struct Outcome {
  std::string criterion;
  std::uint64_t seed = 0;
  std::int64_t iteration = 0;
  // False when the rule never fired within the budget (iteration is then T).
  bool fired = false;
  // Empty for the validation criterion, whose iterate comes from the holdout run.
  std::optional<double> train_loss;
  std::optional<double> test_loss;
  std::optional<double> test_accuracy;
  std::optional<double> exact_s;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<TraceRecord> trace;
  std::vector<Outcome> outcomes;
  // Parameter after the last optimizer step.
  Vector final_theta;
  std::vector<std::string> parameter_names;
};

// Trains one seed with every enabled criterion observing.
SeedRun run_seed(const RunConfig& cfg, std::uint64_t seed);

// Deterministic threshold replayed over a finished trace.
Outcome threshold_outcome(const SeedRun& run, double u);

struct CriterionStats {
  std::string criterion;
  std::size_t runs = 0;
  double fired_fraction = 0.0;
  double mean_iteration = 0.0;
  std::optional<double> mean_test_loss;
  std::optional<double> std_test_loss;
  std::optional<double> mean_test_accuracy;
  std::optional<double> std_test_accuracy;
  std::optional<double> mean_exact_s;
};

// Grouped by criterion in first-seen order; std uses the n - 1 denominator
// (0 for a single run).
std::vector<CriterionStats> summarize(const std::vector<Outcome>& outcomes);

void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

struct RunReport {
  std::vector<SeedRun> runs;
  std::vector<Outcome> outcomes;
  std::vector<CriterionStats> stats;
};

struct SweepRow {
  double u = 0.0;
  Outcome outcome;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  // criterion field holds the u value formatted as text.
  std::vector<CriterionStats> stats;
  std::vector<double> u_values;
};

struct UncertaintyRow {
  std::string parameter;
  double theta = 0.0;
  double sigma_gradstop = 0.0;
  std::optional<double> sigma_mcmc;
  std::optional<double> sigma_exact;
};

struct UncertaintyReport {
  std::vector<UncertaintyRow> rows;
  std::optional<double> acceptance_rate;
  std::optional<double> step_scale;
  bool tuning_warning = false;
};

// Per-parameter uncertainty at the final iterate of one seed, compared with
// an MCMC chain (when mcmc.samples > 0) and, for the quadratic model, with the
// exact posterior.
UncertaintyReport uncertainty_report(const RunConfig& cfg, std::uint64_t seed);

// Each command validates the config, writes config.json plus its outputs into
// `out` (created if needed) and returns what it wrote.
RunReport cmd_run(const RunConfig& cfg, const std::filesystem::path& out);
SweepReport cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out);
UncertaintyReport cmd_uncertainty(const RunConfig& cfg, const std::filesystem::path& out);

}  // namespace gradstop::experiment
