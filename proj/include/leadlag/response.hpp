// response.hpp: average trajectory of the lagger's quotes after a leader
// midquote move beyond a threshold, censored at the leader's next move.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leadlag/types.hpp"

namespace leadlag {

enum class ResponseVariable {
  bid_vs_self,      // bid(t+l) - bid(t)
  ask_vs_self,      // ask(t+l) - ask(t)
  bid_vs_opposite,  // bid(t+l) - ask(t)
  ask_vs_opposite,  // ask(t+l) - bid(t)
  spread_vs_self,   // spread(t+l) - spread(t)
};

std::string to_string(ResponseVariable v);

struct ResponseCurve {
  ResponseVariable variable{};
  int theta_halfticks = 0;          // signed threshold in leader half-ticks
  std::vector<double> lags;         // seconds
  std::vector<std::optional<double>> values;  // mean deviation, lagger ticks
  std::vector<std::size_t> counts;  // non-increasing in the lag
};

// One day's inputs: the leader's tick-time series and the lagger's
// continuous quote stream.
struct ResponseDay {
  TickSeries leader;
  std::vector<QuoteEvent> lagger_quotes;
};

struct ResponseOptions {
  std::vector<int> thetas_halfticks;  // default +-1..6
  double max_lag_s = 10.0;
  double lag_step_s = 0.1;

  static ResponseOptions defaults();
};

// For every leader increment r with r >= theta (theta > 0) resp. r <= theta
// (theta < 0), records the lagger's quote-state deviations on the lag grid,
// keeping only lags that happen before the leader's next midquote change.
// Quote state at an instant is the last quote at or before it. Deviations
// are in units of the lagger's tick size.
std::vector<ResponseCurve> response_curves(std::span<const ResponseDay> days,
                                           double leader_tick_size, double lagger_tick_size,
                                           const ResponseOptions& opts =
                                               ResponseOptions::defaults());

}  // namespace leadlag
