// response.cpp
#include "leadlag/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leadlag {

std::string to_string(ResponseVariable v) {
  switch (v) {
    case ResponseVariable::bid_vs_self: return "bid_vs_self";
    case ResponseVariable::ask_vs_self: return "ask_vs_self";
    case ResponseVariable::bid_vs_opposite: return "bid_vs_opposite";
    case ResponseVariable::ask_vs_opposite: return "ask_vs_opposite";
    case ResponseVariable::spread_vs_self: return "spread_vs_self";
  }
  return "?";
}

ResponseOptions ResponseOptions::defaults() {
  ResponseOptions opts;
  for (int i = 6; i >= 1; --i) opts.thetas_halfticks.push_back(-i);
  for (int i = 1; i <= 6; ++i) opts.thetas_halfticks.push_back(i);
  return opts;
}

namespace {

constexpr std::size_t kNumVariables = 5;

struct Accumulator {
  std::vector<double> sum;
  std::vector<std::size_t> count;

  explicit Accumulator(std::size_t n_lags) : sum(n_lags, 0.0), count(n_lags, 0) {}
};

// Quote state walker: last quote with ts <= t, advanced monotonically.
class QuoteWalker {
 public:
  explicit QuoteWalker(std::span<const QuoteEvent> quotes) : quotes_(quotes) {}

  const QuoteEvent* at_or_before(double t_s) {
    while (idx_ + 1 < quotes_.size() && ms_to_s(quotes_[idx_ + 1].ts_ms) <= t_s) ++idx_;
    if (quotes_.empty() || ms_to_s(quotes_[idx_].ts_ms) > t_s) return nullptr;
    return &quotes_[idx_];
  }

 private:
  std::span<const QuoteEvent> quotes_;
  std::size_t idx_ = 0;
};

}  // namespace

std::vector<ResponseCurve> response_curves(std::span<const ResponseDay> days,
                                           double leader_tick_size, double lagger_tick_size,
                                           const ResponseOptions& opts) {
  if (!(leader_tick_size > 0.0) || !(lagger_tick_size > 0.0))
    throw std::invalid_argument("response_curves: tick sizes must be > 0");
  if (opts.thetas_halfticks.empty())
    throw std::invalid_argument("response_curves: no thresholds");

  std::vector<double> lags;
  for (std::size_t k = 0;; ++k) {
    const double l = static_cast<double>(k) * opts.lag_step_s;
    if (l > opts.max_lag_s + 1e-9) break;
    lags.push_back(l);
  }
  const std::size_t n_lags = lags.size();

  // accumulators[theta_index][variable]
  std::vector<std::vector<Accumulator>> acc(
      opts.thetas_halfticks.size(), std::vector<Accumulator>(kNumVariables, Accumulator(n_lags)));

  std::vector<double> dev(kNumVariables * n_lags);
  for (const auto& day : days) {
    const auto& leader = day.leader;
    QuoteWalker event_walker(day.lagger_quotes);  // events are time-ordered
    for (std::size_t i = 0; i < leader.n_increments(); ++i) {
      const double r = leader.increment(i);
      const double t_event = leader.t[i + 1];  // the move completes here
      const double t_censor =
          (i + 2 < leader.size()) ? leader.t[i + 2] : std::numeric_limits<double>::infinity();

      const QuoteEvent* q0 = event_walker.at_or_before(t_event);
      if (q0 == nullptr) continue;
      const double bid0 = q0->bid;
      const double ask0 = q0->ask;
      const double spread0 = q0->spread();

      // One pass over the lag grid per event; the deviations are shared by
      // every qualifying threshold.
      QuoteWalker lag_walker = event_walker;
      std::size_t n_valid = 0;
      for (std::size_t k = 0; k < n_lags; ++k) {
        const double t_lag = t_event + lags[k];
        if (!(t_lag < t_censor)) break;  // censored at the next leader move
        const QuoteEvent* q = lag_walker.at_or_before(t_lag);
        if (q == nullptr) break;
        dev[0 * n_lags + k] = (q->bid - bid0) / lagger_tick_size;
        dev[1 * n_lags + k] = (q->ask - ask0) / lagger_tick_size;
        dev[2 * n_lags + k] = (q->bid - ask0) / lagger_tick_size;
        dev[3 * n_lags + k] = (q->ask - bid0) / lagger_tick_size;
        dev[4 * n_lags + k] = (q->spread() - spread0) / lagger_tick_size;
        ++n_valid;
      }
      if (n_valid == 0) continue;

      for (std::size_t ti = 0; ti < opts.thetas_halfticks.size(); ++ti) {
        const int theta_i = opts.thetas_halfticks[ti];
        const double theta = static_cast<double>(theta_i) * leader_tick_size / 2.0;
        const bool qualifies = theta_i > 0 ? (r >= theta * (1.0 - 1e-9))
                                           : (r <= theta * (1.0 - 1e-9));
        if (!qualifies) continue;
        auto& a = acc[ti];
        for (std::size_t v = 0; v < kNumVariables; ++v) {
          for (std::size_t k = 0; k < n_valid; ++k) {
            a[v].sum[k] += dev[v * n_lags + k];
            ++a[v].count[k];
          }
        }
      }
    }
  }

  std::vector<ResponseCurve> out;
  out.reserve(opts.thetas_halfticks.size() * kNumVariables);
  constexpr ResponseVariable kVars[kNumVariables] = {
      ResponseVariable::bid_vs_self, ResponseVariable::ask_vs_self,
      ResponseVariable::bid_vs_opposite, ResponseVariable::ask_vs_opposite,
      ResponseVariable::spread_vs_self};
  for (std::size_t ti = 0; ti < opts.thetas_halfticks.size(); ++ti) {
    for (std::size_t v = 0; v < kNumVariables; ++v) {
      ResponseCurve curve;
      curve.variable = kVars[v];
      curve.theta_halfticks = opts.thetas_halfticks[ti];
      curve.lags = lags;
      curve.values.resize(n_lags);
      curve.counts = acc[ti][v].count;
      for (std::size_t k = 0; k < n_lags; ++k)
        if (curve.counts[k] > 0)
          curve.values[k] = acc[ti][v].sum[k] / static_cast<double>(curve.counts[k]);
      out.push_back(std::move(curve));
    }
  }
  return out;
}

}  // namespace leadlag
