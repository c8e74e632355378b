// cli.hpp: the command-line entry point behind the thin argv wrapper.
// Subcommands: ingest, stats, xcorr, intraday, threshold, response,
// backtest, simulate, oracle, surrogate, network. Every run writes its
// artifacts plus a manifest (hashed inputs, parameters, artifact list) under
// the output directory; outputs are deterministic for a fixed config.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace leadlag {

struct RunConfig {
  std::string subcommand;

  // Per-day market-data inputs (file i of x pairs with file i of y).
  std::vector<std::string> x_trades, x_quotes, y_trades, y_quotes;
  std::vector<std::string> x_ticks, y_ticks;  // preprocessed tick files
  std::string x_meta, y_meta;

  // network: repeated NAME=tickfile entries (a name may repeat across days),
  // or a precomputed pair-summary CSV.
  std::vector<std::string> instrument_ticks;
  std::string pairs_csv;
  std::string edge_corr = "max";  // MST weight source: max | zero (rho at lag 0)

  // Analysis parameters.
  std::vector<double> lag_grid_positive;  // override; empty keeps the standard grid
  double max_lag_s = 0.0;                 // truncate the grid when > 0
  std::vector<double> thresholds;         // thresholded estimator, price units
  std::vector<int> theta_halfticks;       // response thresholds (default +-1..6)
  double slice_minutes = 5.0;
  double response_max_lag_s = 10.0;
  double tick_theta = 0.0;                // ingest: coarse tick-time threshold (ticks)
  bool use_abs_argmax = false;

  // Backtest.
  int window_days = 20;
  std::string execution = "midquote";  // midquote | cross_spread
  std::string benchmark = "random";    // random | autocorrelation
  std::vector<double> coarse_thetas;   // tick multiples for the coarse sweep

  // Simulation / oracle.
  double lambda1 = 0.2;
  std::vector<double> lambda2{0.2, 0.1, 0.04, 0.02};
  double rho = 0.8;
  double T_s = 30600.0;
  double mesh_s = 5.0;
  int n_reps = 64;
  std::vector<double> oracle_lags{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
  int mc_reps = 10000;     // oracle Monte Carlo cross-check replications
  double pt_mesh_s = 5.0;  // previous-tick estimator mesh
  double surrogate_mesh_s = 1.0;

  // Globals.
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0 = available parallelism
  std::string format = "json";
  std::string out_dir = ".";
  bool dry_run = false;
};

// Executes the subcommand; throws DataError / NumericGuardError /
// std::invalid_argument on failures (mapped to exit codes by the wrapper).
void run(const RunConfig& config);

// Exit-code mapping used by the executable: 0 success, 1 usage error,
// 2 data error, 3 numerical-guard violation.
int run_with_exit_code(const RunConfig& config);

}  // namespace leadlag
