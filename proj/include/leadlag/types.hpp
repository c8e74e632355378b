// types.hpp: core event and series types shared across the library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leadlag {

using Milliseconds = std::int64_t;

inline constexpr double kSecondsPerMs = 1e-3;

inline double ms_to_s(Milliseconds ms) { return static_cast<double>(ms) * kSecondsPerMs; }

// Input data violated a contract (bad file, crossed book, non-monotone time).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical guard tripped (e.g. the oracle overflow guard).
class NumericGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TradeEvent {
  Milliseconds ts_ms = 0;
  double price = 0.0;
  double qty = 0.0;
  // Set by same-timestamp aggregation when the group walked the book
  // (>= 2 distinct consecutive execution prices).
  bool trade_through = false;
};

struct QuoteEvent {
  Milliseconds ts_ms = 0;
  double bid = 0.0;
  double bid_qty = 0.0;
  double ask = 0.0;
  double ask_qty = 0.0;

  double mid() const { return 0.5 * (bid + ask); }
  double spread() const { return ask - bid; }
};

struct InstrumentMeta {
  std::string ric;
  double tick_size = 0.0;
  Milliseconds session_open_ms = 0;
  Milliseconds session_close_ms = 0;
  std::string currency;
};

// Midquote prevailing at a trade instant, time in seconds.
struct MidquoteSample {
  double t_s = 0.0;
  double mid = 0.0;
};

// Event-clock price series: epochs with strictly increasing times and the
// midquote at each epoch. Increment i spans the half-open interval
// ]t[i], t[i+1]] and has value m[i+1] - m[i]. Tick-time series (from
// to_tick_time) have all increments non-zero; simulation output may carry
// zero increments when two sampling times hit the same path value, which is
// inert for the estimators (zero contribution to both numerator and
// denominator).
struct TickSeries {
  std::vector<double> t;
  std::vector<double> m;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
  std::size_t n_increments() const { return t.empty() ? 0 : t.size() - 1; }
  double increment(std::size_t i) const { return m[i + 1] - m[i]; }

  void push_back(double time_s, double mid) {
    if (!t.empty() && time_s <= t.back())
      throw DataError("TickSeries epochs must be strictly increasing");
    t.push_back(time_s);
    m.push_back(mid);
  }
};

inline TickSeries make_tick_series(const std::vector<MidquoteSample>& samples) {
  TickSeries out;
  out.t.reserve(samples.size());
  out.m.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.t_s, s.mid);
  return out;
}

// One trading day of a pair, on a common time axis.
struct DayPair {
  TickSeries x;
  TickSeries y;
};

}  // namespace leadlag
