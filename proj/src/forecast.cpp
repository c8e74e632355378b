// forecast.cpp
#include "leadlag/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leadlag/hycorr.hpp"
#include "leadlag/tickdata.hpp"

namespace leadlag {

CalibrationOptions CalibrationOptions::defaults() {
  CalibrationOptions opts;
  const LagGrid grid = LagGrid::standard();
  for (double l : grid.lags)
    if (l > 0.0) opts.positive_lags.push_back(l);
  return opts;
}

ForecastModel calibrate(std::span<const BacktestDay> window, const CalibrationOptions& opts) {
  if (window.empty()) throw std::invalid_argument("calibrate: empty window");
  if (opts.positive_lags.empty()) throw std::invalid_argument("calibrate: no candidate lags");
  for (std::size_t k = 1; k < opts.positive_lags.size(); ++k)
    if (opts.positive_lags[k] <= opts.positive_lags[k - 1])
      throw std::invalid_argument("calibrate: lags must be increasing");

  // Per-day correlations at the candidate positive lags.
  const std::size_t n_lags = opts.positive_lags.size();
  std::vector<std::vector<double>> per_lag(n_lags);
  std::vector<double> durations;
  for (const auto& day : window) {
    const TickSeries& leader = opts.self ? day.lagger : day.leader;
    const TickSeries& lagger = day.lagger;
    if (lagger.n_increments() >= 1)
      durations.push_back((lagger.t.back() - lagger.t.front()) /
                          static_cast<double>(lagger.n_increments()));
    if (leader.n_increments() < 2 || lagger.n_increments() < 2) continue;
    const double sxx = hy_sum_squares(leader);
    const double syy = hy_sum_squares(lagger);
    if (sxx <= 0.0 || syy <= 0.0) continue;
    const double denom = std::sqrt(sxx * syy);
    for (std::size_t k = 0; k < n_lags; ++k)
      per_lag[k].push_back(hy_covariance(leader, lagger, opts.positive_lags[k]) / denom);
  }

  ForecastModel model;
  model.window_days = static_cast<int>(window.size());
  if (!durations.empty()) model.mean_tick_duration_s = stats::mean(durations);

  // Keep lags up to (not including) the first insignificant one.
  for (std::size_t k = 0; k < n_lags; ++k) {
    if (per_lag[k].empty()) break;
    const auto band = stats::daily_band(per_lag[k]);
    if (std::abs(band.mean) < band.half_width95) break;
    model.lags.push_back(opts.positive_lags[k]);
    model.betas.push_back(band.mean);
  }
  return model;
}

int predict_next(const ForecastModel& model, const TickSeries& leader, double now_s) {
  if (model.empty() || leader.n_increments() == 0) return 0;
  const double d = model.mean_tick_duration_s;
  const auto& t = leader.t;
  // Increments completed by `now`: i with t[i+1] <= now.
  const auto ub = static_cast<std::size_t>(
      std::upper_bound(t.begin(), t.end(), now_s) - t.begin());
  const std::size_t n_completed = ub > 0 ? ub - 1 : 0;
  if (n_completed == 0) return 0;

  double score = 0.0;
  for (std::size_t k = 0; k < model.lags.size(); ++k) {
    const double a = now_s - model.lags[k];          // window ]a, b]
    const double b = now_s + d - model.lags[k];
    // First increment with right endpoint past a.
    const auto ua = static_cast<std::size_t>(
        std::upper_bound(t.begin(), t.end(), a) - t.begin());
    std::size_t i = ua > 0 ? ua - 1 : 0;
    double sum = 0.0;
    for (; i < n_completed && t[i] < b; ++i)
      if (t[i + 1] > a) sum += leader.increment(i);
    score += model.betas[k] * sum;
  }
  if (score > 0.0) return 1;
  if (score < 0.0) return -1;
  return 0;
}

std::vector<int> day_forecasts(const ForecastModel& model, const TickSeries& leader,
                               const TickSeries& lagger, ForecastKind kind, stats::Rng& rng) {
  const std::size_t n = lagger.n_increments();
  std::vector<int> out(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    switch (kind) {
      case ForecastKind::leadlag:
      case ForecastKind::autocorrelation:
        out[j] = predict_next(model, leader, lagger.t[j]);
        break;
      case ForecastKind::random:
        out[j] = rng.uniform() < 0.5 ? -1 : 1;
        break;
      case ForecastKind::perfect: {
        const double r = lagger.increment(j);
        out[j] = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
        break;
      }
    }
  }
  return out;
}

namespace {

const QuoteEvent* quote_at_or_before(std::span<const QuoteEvent> quotes, double t_s,
                                     std::size_t& hint) {
  while (hint + 1 < quotes.size() && ms_to_s(quotes[hint + 1].ts_ms) <= t_s) ++hint;
  if (quotes.empty() || ms_to_s(quotes[hint].ts_ms) > t_s) return nullptr;
  return &quotes[hint];
}

TickSeries truncate_at(const TickSeries& s, double now_s) {
  TickSeries out;
  for (std::size_t i = 0; i < s.size() && s.t[i] <= now_s; ++i) out.push_back(s.t[i], s.m[i]);
  return out;
}

}  // namespace

BacktestReport backtest(std::span<const BacktestDay> days, const BacktestOptions& opts) {
  if (static_cast<int>(days.size()) <= opts.window_days)
    throw std::invalid_argument("backtest: need more days than the calibration window");

  BacktestReport report;
  auto rng = stats::Rng::substream(opts.seed, 0);

  for (std::size_t d = static_cast<std::size_t>(opts.window_days); d < days.size(); ++d) {
    const auto& day = days[d];
    ForecastModel model;
    if (opts.kind == ForecastKind::leadlag || opts.kind == ForecastKind::autocorrelation) {
      CalibrationOptions copts = opts.calibration;
      copts.self = (opts.kind == ForecastKind::autocorrelation);
      model = calibrate(days.subspan(d - static_cast<std::size_t>(opts.window_days),
                                     static_cast<std::size_t>(opts.window_days)),
                        copts);
    }
    const TickSeries& signal_series =
        (opts.kind == ForecastKind::autocorrelation) ? day.lagger : day.leader;
    const auto forecasts = day_forecasts(model, signal_series, day.lagger, opts.kind, rng);

    double day_return = 0.0;
    std::size_t day_hits = 0, day_trades = 0;
    std::size_t quote_hint_entry = 0, quote_hint_exit = 0;
    for (std::size_t j = 0; j < forecasts.size(); ++j) {
      const int f = forecasts[j];
      if (f == 0) {
        ++report.n_abstained;
        continue;
      }
      const double now = day.lagger.t[j];
      if (opts.audit_no_lookahead &&
          (opts.kind == ForecastKind::leadlag || opts.kind == ForecastKind::autocorrelation)) {
        const TickSeries trunc = truncate_at(signal_series, now);
        if (predict_next(model, trunc, now) != f)
          throw std::logic_error("backtest audit: forecast differs on truncated stream");
      }
      const double m0 = day.lagger.m[j];
      const double m1 = day.lagger.m[j + 1];
      const int realized = (m1 - m0) > 0.0 ? 1 : -1;

      double ret;
      if (opts.execution == Execution::midquote) {
        ret = f * (m1 - m0) / m0;
      } else {
        const QuoteEvent* q0 = quote_at_or_before(day.lagger_quotes, now, quote_hint_entry);
        const QuoteEvent* q1 =
            quote_at_or_before(day.lagger_quotes, day.lagger.t[j + 1], quote_hint_exit);
        if (q0 == nullptr || q1 == nullptr) {
          ++report.n_skipped_no_quote;
          continue;
        }
        // Long: buy the ask now, sell the bid at the next tick; short is the
        // mirror. Normalized by the entry midquote so that per trade
        // cross-spread return = midquote return - (s0 + s1) / (2 m0).
        ret = (f > 0) ? f * (q1->bid - q0->ask) / m0 : f * (q1->ask - q0->bid) / m0;
      }

      ++day_trades;
      if (f == realized) ++day_hits;
      report.per_trade_returns.push_back(ret);
      report.trades.push_back({now, f, realized, ret});
      day_return += ret;
    }
    report.daily_returns.push_back(day_return);
    report.daily_accuracy.push_back(
        day_trades > 0 ? static_cast<double>(day_hits) / static_cast<double>(day_trades) : 0.0);
    report.n_hits += day_hits;
    report.n_trades += day_trades;
  }

  if (report.n_trades > 0) {
    report.accuracy = static_cast<double>(report.n_hits) / static_cast<double>(report.n_trades);
    report.mean_return_bp = stats::mean(report.per_trade_returns) * 1e4;
  }
  if (!report.daily_returns.empty()) {
    report.daily_return_mean = stats::mean(report.daily_returns);
    report.daily_return_sd = stats::sample_sd(report.daily_returns);
    if (report.daily_return_sd > 0.0)
      report.sharpe_annualized =
          report.daily_return_mean / report.daily_return_sd * std::sqrt(252.0);
  }
  return report;
}

ReportComparison compare_reports(const BacktestReport& a, const BacktestReport& b) {
  if (a.per_trade_returns.empty() || b.per_trade_returns.empty())
    throw std::invalid_argument("compare_reports: empty return list");
  ReportComparison out;
  const auto ks = stats::ks_two_sample(a.per_trade_returns, b.per_trade_returns);
  out.ks_distance = ks.d;
  out.ks_pvalue = ks.p_value;
  const auto prop = stats::two_proportion_test(a.n_hits, a.n_trades, b.n_hits, b.n_trades);
  out.t_stat = prop.z;
  out.t_pvalue = prop.p_value;
  return out;
}

std::vector<std::pair<double, BacktestReport>> coarse_tick_sweep(
    std::span<const BacktestDay> days, std::span<const double> thetas_ticks,
    double lagger_tick_size, const BacktestOptions& opts) {
  if (!(lagger_tick_size > 0.0))
    throw std::invalid_argument("coarse_tick_sweep: tick size must be > 0");
  std::vector<std::pair<double, BacktestReport>> out;
  for (double theta : thetas_ticks) {
    std::vector<BacktestDay> coarse(days.begin(), days.end());
    bool usable = true;
    for (auto& day : coarse) {
      day.lagger = to_tick_time(day.lagger, theta, lagger_tick_size);
      if (day.lagger.n_increments() == 0) usable = false;
    }
    if (!usable)
      throw DataError("coarse_tick_sweep: theta leaves an empty lagger series");
    out.emplace_back(theta, backtest(coarse, opts));
  }
  return out;
}

}  // namespace leadlag
