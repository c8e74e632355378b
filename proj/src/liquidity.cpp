// liquidity.cpp
#include "leadlag/liquidity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leadlag/stats.hpp"
#include "leadlag/tickdata.hpp"

namespace leadlag {

double daily_average(std::span<const std::vector<double>> per_day_values) {
  double sum_of_means = 0.0;
  std::size_t n_days = 0;
  for (const auto& day : per_day_values) {
    if (day.empty()) continue;
    sum_of_means += stats::mean(day);
    ++n_days;
  }
  if (n_days == 0) throw std::invalid_argument("daily_average: no day with events");
  return sum_of_means / static_cast<double>(n_days);
}

namespace {

// s == delta up to the decimal-grid slack used throughout.
bool is_unit_spread(double spread, double tick) {
  return std::abs(spread - tick) <= 1e-9 * tick;
}

}  // namespace

LiquidityStats compute_liquidity_stats(std::span<const MarketDay> days,
                                       const InstrumentMeta& meta) {
  std::vector<std::vector<double>> intertrade, tick_over_mid, spread_ticks, unit_spread,
      trade_through, vol_ticks, turnover;
  bool any_quotes = false;

  for (const auto& day : days) {
    ParseReport report;
    const auto mids = build_midquote_series(day.quotes, day.trades, report);
    if (!day.quotes.empty()) any_quotes = true;

    auto& dur = intertrade.emplace_back();
    auto& tom = tick_over_mid.emplace_back();
    auto& spt = spread_ticks.emplace_back();
    auto& uni = unit_spread.emplace_back();
    auto& tth = trade_through.emplace_back();
    auto& vol = vol_ticks.emplace_back();
    auto& tur = turnover.emplace_back();

    for (std::size_t i = 1; i < day.trades.size(); ++i)
      dur.push_back(ms_to_s(day.trades[i].ts_ms - day.trades[i - 1].ts_ms));
    for (const auto& t : day.trades) {
      tth.push_back(t.trade_through ? 1.0 : 0.0);
      tur.push_back(t.price * t.qty);
    }
    for (const auto& s : mids) tom.push_back(meta.tick_size / s.mid * 1e4);
    for (std::size_t i = 1; i < mids.size(); ++i)
      vol.push_back(std::abs(mids[i].mid - mids[i - 1].mid) / meta.tick_size);

    // Spread sampled on a trading-time basis: the quote prevailing at each
    // trade.
    std::size_t q = 0;
    for (const auto& trade : day.trades) {
      while (q < day.quotes.size() && day.quotes[q].ts_ms < trade.ts_ms) ++q;
      if (q == 0) continue;
      const double s = day.quotes[q - 1].spread();
      spt.push_back(s / meta.tick_size);
      uni.push_back(is_unit_spread(s, meta.tick_size) ? 1.0 : 0.0);
    }
  }

  LiquidityStats out;
  out.mean_intertrade_s = daily_average(intertrade);
  out.trade_through_freq = daily_average(trade_through);
  out.turnover_per_trade = daily_average(turnover);
  if (any_quotes) {
    out.tick_over_mid_bp = daily_average(tick_over_mid);
    out.spread_in_ticks = daily_average(spread_ticks);
    out.unit_spread_freq = daily_average(unit_spread);
    out.vol_in_ticks = daily_average(vol_ticks);
  }
  return out;
}

QuadrantCounts quadrant_counts(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("quadrant_counts: empty input");
  QuadrantCounts out;
  std::size_t pp = 0, mm = 0, pm = 0, mp = 0;
  for (const auto& [llr, ratio] : pairs) {
    if (!(llr > 0.0) || !(ratio > 0.0))
      throw std::invalid_argument("quadrant_counts: LLR and ratio must be positive");
    if (llr == 1.0 || ratio == 1.0) {
      ++out.n_boundary;
      continue;
    }
    if (llr > 1.0)
      (ratio > 1.0 ? pp : pm) += 1;
    else
      (ratio > 1.0 ? mp : mm) += 1;
  }
  out.n_used = pp + mm + pm + mp;
  if (out.n_used > 0) {
    const double n = static_cast<double>(out.n_used);
    out.n_pp = pp / n;
    out.n_mm = mm / n;
    out.n_pm = pm / n;
    out.n_mp = mp / n;
  }
  return out;
}

std::array<DecileBin, 10> decile_bins(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 10) throw std::invalid_argument("decile_bins: need >= 10 pairs");

  std::vector<double> ratios;
  ratios.reserve(pairs.size());
  for (const auto& p : pairs) ratios.push_back(p.first);
  std::sort(ratios.begin(), ratios.end());

  std::array<double, 11> edges{};
  for (int k = 0; k <= 10; ++k)
    edges[static_cast<std::size_t>(k)] = stats::quantile_sorted(ratios, k / 10.0);

  std::array<std::vector<double>, 10> bins;
  for (const auto& [ratio, corr] : pairs) {
    // Left-closed bins; the top edge closes the last bin.
    std::size_t b = 9;
    for (std::size_t k = 0; k < 10; ++k) {
      if (ratio < edges[k + 1]) {
        b = k;
        break;
      }
    }
    bins[b].push_back(corr);
  }

  std::array<DecileBin, 10> out;
  for (std::size_t k = 0; k < 10; ++k) {
    out[k].ratio_lo = edges[k];
    out[k].ratio_hi = edges[k + 1];
    out[k].n = bins[k].size();
    if (!bins[k].empty()) {
      out[k].mean_corr = stats::mean(bins[k]);
      out[k].ci95 = 1.96 * stats::stderr_mean(bins[k]);
    }
  }
  return out;
}

}  // namespace leadlag
