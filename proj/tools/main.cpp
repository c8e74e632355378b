// main.cpp: argv wrapper around leadlag::run.
#include <CLI11.hpp>

#include "leadlag/cli.hpp"

namespace {

void add_pair_inputs(CLI::App* cmd, leadlag::RunConfig& config) {
  cmd->add_option("--x-trades", config.x_trades, "leader trades CSV, one per day");
  cmd->add_option("--x-quotes", config.x_quotes, "leader quotes CSV, one per day");
  cmd->add_option("--y-trades", config.y_trades, "lagger trades CSV, one per day");
  cmd->add_option("--y-quotes", config.y_quotes, "lagger quotes CSV, one per day");
  cmd->add_option("--x-ticks", config.x_ticks, "leader tick files (alternative input)");
  cmd->add_option("--y-ticks", config.y_ticks, "lagger tick files (alternative input)");
  cmd->add_option("--x-meta", config.x_meta, "leader instrument meta JSON");
  cmd->add_option("--y-meta", config.y_meta, "lagger instrument meta JSON");
}

void add_grid_options(CLI::App* cmd, leadlag::RunConfig& config) {
  cmd->add_option("--lags", config.lag_grid_positive,
                  "positive lag grid override, seconds");
  cmd->add_option("--max-lag", config.max_lag_s, "truncate the lag grid, seconds");
  cmd->add_flag("--abs-argmax", config.use_abs_argmax,
                "locate the maximum of |rho| instead of rho");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lead/lag analysis of asynchronously traded instruments"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too

  leadlag::RunConfig config;
  bool rho_from_data = false;

  app.add_option("--seed", config.seed, "RNG seed");
  app.add_option("--jobs", config.jobs, "worker threads (0 = all cores)");
  app.add_option("--format", config.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", config.out_dir, "output directory");
  app.add_flag("--dry-run", config.dry_run, "validate inputs without computing");

  auto* ingest = app.add_subcommand("ingest", "preprocess trades/quotes into tick files");
  ingest->add_option("--trades", config.x_trades, "trades CSV, one per day")->required();
  ingest->add_option("--quotes", config.x_quotes, "quotes CSV, one per day")->required();
  ingest->add_option("--meta", config.x_meta, "instrument meta JSON")->required();
  ingest->add_option("--theta", config.tick_theta, "coarse tick-time threshold, ticks");

  auto* stats = app.add_subcommand("stats", "liquidity summary statistics");
  stats->add_option("--trades", config.x_trades)->required();
  stats->add_option("--quotes", config.x_quotes)->required();
  stats->add_option("--meta", config.x_meta)->required();

  auto* xcorr = app.add_subcommand("xcorr", "lagged cross-correlation and LLR");
  add_pair_inputs(xcorr, config);
  add_grid_options(xcorr, config);

  auto* intraday = app.add_subcommand("intraday", "per-slice lead/lag profile");
  add_pair_inputs(intraday, config);
  add_grid_options(intraday, config);
  intraday->add_option("--slice-minutes", config.slice_minutes, "slice width");

  auto* threshold = app.add_subcommand("threshold", "thresholded cross-correlation");
  add_pair_inputs(threshold, config);
  add_grid_options(threshold, config);
  threshold->add_option("--theta", config.thresholds, "thresholds, price units")->required();

  auto* response = app.add_subcommand("response", "lagger quote response functions");
  add_pair_inputs(response, config);
  response->add_option("--theta-halfticks", config.theta_halfticks,
                       "signed thresholds in leader half-ticks (default +-1..6)");
  response->add_option("--max-lag", config.response_max_lag_s, "response horizon, seconds");

  auto* backtest = app.add_subcommand("backtest", "one-tick-ahead forecast backtest");
  add_pair_inputs(backtest, config);
  backtest->add_option("--lags", config.lag_grid_positive, "candidate positive lags");
  backtest->add_option("--window", config.window_days, "calibration window, days");
  backtest->add_option("--execution", config.execution, "midquote|cross_spread")
      ->check(CLI::IsMember({"midquote", "cross_spread"}));
  backtest->add_option("--benchmark", config.benchmark, "random|autocorrelation")
      ->check(CLI::IsMember({"random", "autocorrelation"}));
  backtest->add_option("--coarse-theta", config.coarse_thetas,
                       "coarse tick-time sweep thresholds, ticks");

  auto* simulate = app.add_subcommand("simulate", "Poisson-sampled Brownian study");
  simulate->add_option("--lambda1", config.lambda1, "leader intensity, events/s");
  simulate->add_option("--lambda2", config.lambda2, "lagger intensities (repeatable)");
  simulate->add_option("--rho", config.rho, "Brownian correlation");
  simulate->add_option("--T", config.T_s, "horizon, seconds");
  simulate->add_option("--mesh", config.mesh_s, "Brownian step, seconds");
  simulate->add_option("--reps", config.n_reps, "replications");
  simulate->add_option("--pt-mesh", config.pt_mesh_s, "previous-tick sampling mesh");
  simulate->add_option("--max-lag", config.max_lag_s, "lag grid truncation");

  auto* oracle = app.add_subcommand("oracle", "closed-form expected covariance");
  oracle->add_option("--lambda1", config.lambda1)->required();
  oracle->add_option("--lambda2", config.lambda2)->required();
  oracle->add_option("--rho", config.rho)->required();
  oracle->add_option("--T", config.T_s)->required();
  oracle->add_option("--lag", config.oracle_lags, "lags to evaluate");
  oracle->add_option("--mc-reps", config.mc_reps,
                     "Monte Carlo cross-check replications (0 disables)");

  auto* surrogate = app.add_subcommand("surrogate", "same-timestamp Brownian surrogates");
  surrogate->add_option("--x-ticks", config.x_ticks)->required();
  surrogate->add_option("--y-ticks", config.y_ticks)->required();
  surrogate->add_option("--rho", config.rho, "surrogate correlation");
  surrogate->add_flag("--rho-from-data", rho_from_data,
                      "use the pair's own HY correlation at lag 0");
  surrogate->add_option("--mesh", config.surrogate_mesh_s, "Brownian mesh, seconds");

  auto* network = app.add_subcommand("network", "lead/lag minimum spanning tree");
  network->add_option("--ticks", config.instrument_ticks,
                      "NAME=tickfile entries (repeat per instrument and day)");
  network->add_option("--pairs", config.pairs_csv, "precomputed pair summary CSV");
  network->add_option("--edge-corr", config.edge_corr, "MST weight: max|zero")
      ->check(CLI::IsMember({"max", "zero"}));
  add_grid_options(network, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1; --help exits 0
  }

  for (auto* cmd : {ingest, stats, xcorr, intraday, threshold, response, backtest, simulate,
                    oracle, surrogate, network})
    if (cmd->parsed()) config.subcommand = cmd->get_name();
  if (rho_from_data) config.rho = std::numeric_limits<double>::quiet_NaN();

  return leadlag::run_with_exit_code(config);
}
