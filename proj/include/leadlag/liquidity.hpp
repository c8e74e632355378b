// liquidity.hpp: per-asset liquidity summary statistics and the
// LLR-vs-liquidity-ratio analyses (quadrant counts, decile bins).
#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "leadlag/types.hpp"

namespace leadlag {

// One preprocessed trading day: trades already VWAP-aggregated and
// session-filtered, quotes session-filtered.
struct MarketDay {
  std::vector<TradeEvent> trades;
  std::vector<QuoteEvent> quotes;
};

// The seven summary columns. Quote-dependent fields are null when the day
// set has no quotes at all.
struct LiquidityStats {
  double mean_intertrade_s = 0.0;
  std::optional<double> tick_over_mid_bp;
  std::optional<double> spread_in_ticks;
  std::optional<double> unit_spread_freq;
  double trade_through_freq = 0.0;
  std::optional<double> vol_in_ticks;
  double turnover_per_trade = 0.0;
};

// Unweighted mean of per-day means; days with no events are excluded from
// the day count. Throws if every day is empty.
double daily_average(std::span<const std::vector<double>> per_day_values);

LiquidityStats compute_liquidity_stats(std::span<const MarketDay> days,
                                       const InstrumentMeta& meta);

struct QuadrantCounts {
  double n_pp = 0.0;  // LLR > 1, ratio > 1
  double n_mm = 0.0;  // LLR < 1, ratio < 1
  double n_pm = 0.0;  // LLR > 1, ratio < 1
  double n_mp = 0.0;  // LLR < 1, ratio > 1
  std::size_t n_boundary = 0;  // excluded: exactly on x = 1 or y = 1
  std::size_t n_used = 0;

  double concordant() const { return n_pp + n_mm; }
};

// pairs = (LLR, indicator ratio), both > 0.
QuadrantCounts quadrant_counts(std::span<const std::pair<double, double>> pairs);

struct DecileBin {
  double ratio_lo = 0.0;
  double ratio_hi = 0.0;
  double mean_corr = 0.0;
  double ci95 = 0.0;  // 1.96 sd / sqrt(n)
  std::size_t n = 0;
};

// pairs = (indicator ratio, max correlation); bins by empirical deciles of
// the ratio (linear-interpolation quantiles), ties kept in input order.
std::array<DecileBin, 10> decile_bins(std::span<const std::pair<double, double>> pairs);

}  // namespace leadlag
