// forecast.hpp: one-tick-ahead midquote direction forecasts for the lagger
// from the leader's past increments, with backtest accounting, benchmark
// strategies and report comparisons.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "leadlag/stats.hpp"
#include "leadlag/types.hpp"

namespace leadlag {

struct ForecastModel {
  std::vector<double> lags;   // retained positive lags l_1..l_p, increasing
  std::vector<double> betas;  // beta_k = mean rho(l_k) over the window
  double mean_tick_duration_s = 0.0;
  int window_days = 0;

  bool empty() const { return lags.empty(); }
};

struct BacktestDay {
  TickSeries leader;
  TickSeries lagger;
  std::vector<QuoteEvent> lagger_quotes;  // used by cross-spread execution
};

struct CalibrationOptions {
  std::vector<double> positive_lags;  // candidate grid; default standard positives
  double z_crit = 1.96;               // significance cut for the last lag l_p
  bool self = false;                  // autocorrelation variant: leader := lagger

  static CalibrationOptions defaults();
};

// betas = across-day mean rho at each positive lag, truncated at the first
// lag whose |mean| drops below its 95% band half-width; mean tick duration
// of the lagger over the same window.
ForecastModel calibrate(std::span<const BacktestDay> window, const CalibrationOptions& opts);

// Sign of sum_k beta_k sum_i r_i 1{leader interval i overlaps
// ]now - l_k, now + d - l_k]} using only increments completed by `now`;
// +1 / -1, or 0 to abstain on an exact-zero score.
int predict_next(const ForecastModel& model, const TickSeries& leader, double now_s);

enum class Execution { midquote, cross_spread };
enum class ForecastKind { leadlag, autocorrelation, random, perfect };

// Forecast stream for one day's decision epochs (a sign per lagger
// increment). `random` draws from rng; `perfect` peeks at the realized sign
// (upper bound); `autocorrelation` expects a self-calibrated model and
// receives the lagger as its leader.
std::vector<int> day_forecasts(const ForecastModel& model, const TickSeries& leader,
                               const TickSeries& lagger, ForecastKind kind, stats::Rng& rng);

struct TradeRecord {
  double ts_s = 0.0;
  int forecast = 0;
  int realized = 0;
  double ret = 0.0;
};

struct BacktestReport {
  double accuracy = 0.0;
  std::size_t n_hits = 0;
  std::size_t n_trades = 0;
  std::size_t n_abstained = 0;
  std::size_t n_skipped_no_quote = 0;
  std::vector<double> per_trade_returns;
  double mean_return_bp = 0.0;
  double daily_return_mean = 0.0;
  double daily_return_sd = 0.0;
  double sharpe_annualized = 0.0;  // daily mean over sd, times sqrt(252)
  std::vector<double> daily_returns;
  std::vector<double> daily_accuracy;
  std::vector<TradeRecord> trades;
};

struct BacktestOptions {
  int window_days = 20;
  CalibrationOptions calibration;
  Execution execution = Execution::midquote;
  ForecastKind kind = ForecastKind::leadlag;
  std::uint64_t seed = 0;
  // Replays every forecast against a leader stream truncated at the decision
  // time and throws if any forecast differs (look-ahead tripwire).
  bool audit_no_lookahead = false;

  BacktestOptions() : calibration(CalibrationOptions::defaults()) {}
};

// Rolling backtest: day d >= window_days is forecast with a model calibrated
// on days [d - window_days, d).
BacktestReport backtest(std::span<const BacktestDay> days, const BacktestOptions& opts);

struct ReportComparison {
  double ks_distance = 0.0;
  double ks_pvalue = 1.0;
  double t_stat = 0.0;
  double t_pvalue = 1.0;
};

// Two-sample KS on the per-trade return distributions plus a two-proportion
// test on the accuracies.
ReportComparison compare_reports(const BacktestReport& a, const BacktestReport& b);

// Re-samples the lagger in coarse tick time (threshold theta ticks),
// recalibrates and backtests per theta. theta = 0.5 on half-tick-grid prices
// coincides with the standard tick clock.
std::vector<std::pair<double, BacktestReport>> coarse_tick_sweep(
    std::span<const BacktestDay> days, std::span<const double> thetas_ticks,
    double lagger_tick_size, const BacktestOptions& opts);

}  // namespace leadlag
