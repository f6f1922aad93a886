// gradstop: run | sweep | uncertainty experiments from a JSON config.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid config or arguments,
// 3 input/output or dataset error.

#include "gradstop/data.hpp"
#include "gradstop/experiment.hpp"
#include "gradstop/kernels.hpp"

#include "CLI11.hpp"

#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

namespace ex = gradstop::experiment;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::optional<std::int64_t> budget;
  std::optional<double> u;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> gradstop_seed;
  std::optional<double> kappa;
  std::optional<std::string> optimizer;
  std::optional<double> lr;
  std::optional<int> patience;
  std::optional<std::string> validation_rule;
  std::optional<int> validation_patience;
  bool no_validation = false;
  bool no_baselines = false;
  std::optional<std::vector<double>> u_grid;
  std::optional<std::size_t> mcmc_samples;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "First seed");
  cmd->add_option("--seeds", o.seeds, "Number of consecutive seeds");
  cmd->add_option("--budget", o.budget, "Iteration budget T");
  cmd->add_option("--u", o.u, "Gradstop threshold u");
  cmd->add_option("--mode", o.mode, "Gradstop mode")->check(CLI::IsMember({"deterministic", "stochastic"}));
  cmd->add_option("--gradstop-seed", o.gradstop_seed, "Seed of the stochastic threshold draw");
  cmd->add_option("--kappa", o.kappa, "Loss scale kappa");
  cmd->add_option("--optimizer", o.optimizer, "Optimizer")->check(CLI::IsMember({"gd", "adam"}));
  cmd->add_option("--lr", o.lr, "Learning rate");
  cmd->add_option("--patience", o.patience, "Baseline patience");
  cmd->add_option("--validation-rule", o.validation_rule, "Validation rule")
      ->check(CLI::IsMember({"argmin", "patience"}));
  cmd->add_option("--validation-patience", o.validation_patience, "Validation patience");
  cmd->add_flag("--no-validation", o.no_validation, "Disable the validation criterion");
  cmd->add_flag("--no-baselines", o.no_baselines, "Disable the baseline criteria");
  cmd->add_option("--mcmc-samples", o.mcmc_samples, "MCMC iterations after burn-in (0 disables)");
}

void apply(const Overrides& o, ex::RunConfig& c) {
  if (o.seed) c.seed = *o.seed;
  if (o.seeds) c.seeds = *o.seeds;
  if (o.budget) c.budget = *o.budget;
  if (o.u) c.gradstop.u = *o.u;
  if (o.mode) c.gradstop.stochastic = *o.mode == "stochastic";
  if (o.gradstop_seed) c.gradstop.seed = *o.gradstop_seed;
  if (o.kappa) c.kappa = *o.kappa;
  if (o.optimizer) c.optimizer.method = gradstop::optim::parse_method(*o.optimizer);
  if (o.lr) c.optimizer.learning_rate = *o.lr;
  if (o.patience) c.baselines.patience = *o.patience;
  if (o.validation_rule) {
    c.validation.rule = *o.validation_rule == "argmin" ? ex::ValidationRule::Argmin : ex::ValidationRule::Patience;
  }
  if (o.validation_patience) c.validation.patience = *o.validation_patience;
  if (o.no_validation) c.validation.enabled = false;
  if (o.no_baselines) c.baselines.enabled = false;
  if (o.u_grid) c.sweep_u = *o.u_grid;
  if (o.mcmc_samples) c.mcmc.samples = *o.mcmc_samples;
  c.validate();
}

ex::RunConfig load_config(const std::string& path, const std::string& preset) {
  if (path.empty()) {
    if (preset == "logistic") return ex::logistic_preset();
    return ex::quadratic_preset();
  }
  std::ifstream in(path);
  if (!in) throw gradstop::data::DataError("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ex::parse_config(text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Early stopping of gradient descent from per-sample gradient statistics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset = "quadratic";
  std::string out_dir = "out";
  std::string log_level = "info";
  Overrides o;

  auto* run = app.add_subcommand("run", "Train once per seed with every criterion observing");
  auto* sweep = app.add_subcommand("sweep", "Replay the deterministic threshold over a grid of u");
  auto* unc = app.add_subcommand("uncertainty", "Per-parameter uncertainty against MCMC");
  for (auto* cmd : {run, sweep, unc}) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--preset", preset, "Built-in config used without --config")
        ->check(CLI::IsMember({"quadratic", "logistic"}));
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--log-level", log_level, "trace|debug|info|warn|error|off");
    add_overrides(cmd, o);
  }
  sweep->add_option("--u-grid", o.u_grid, "Threshold values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::debug("kernels: {}", gradstop::kernels::isa_name(gradstop::kernels::active().isa));

  try {
    auto cfg = load_config(config_path, preset);
    apply(o, cfg);
    if (run->parsed()) {
      const auto rep = ex::cmd_run(cfg, out_dir);
      for (const auto& s : rep.stats) {
        std::cout << s.criterion << ": mean iteration " << s.mean_iteration;
        if (s.mean_test_loss) std::cout << ", test loss " << *s.mean_test_loss << " (sd " << *s.std_test_loss << ")";
        if (s.mean_exact_s) std::cout << ", exact s " << *s.mean_exact_s;
        std::cout << '\n';
      }
    } else if (sweep->parsed()) {
      const auto rep = ex::cmd_sweep(cfg, out_dir);
      for (const auto& s : rep.stats) {
        std::cout << "u=" << s.criterion << ": mean iteration " << s.mean_iteration;
        if (s.mean_test_loss) std::cout << ", test loss " << *s.mean_test_loss << " (sd " << *s.std_test_loss << ")";
        std::cout << '\n';
      }
    } else {
      const auto rep = ex::cmd_uncertainty(cfg, out_dir);
      std::cout << rep.rows.size() << " parameters written to " << out_dir << "/uncertainty.csv\n";
      if (rep.acceptance_rate) std::cout << "MCMC acceptance " << *rep.acceptance_rate << '\n';
    }
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const gradstop::data::DataError& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 3;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
