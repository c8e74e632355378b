// tickdata.hpp: trades/quotes ingestion, preprocessing and event-clock
// construction.
//
// File formats:
//   trades CSV  header "ts_ms,price,qty", ts_ms = integer milliseconds since
//               midnight exchange-local time
//   quotes CSV  header "ts_ms,bid,bid_qty,ask,ask_qty"
//   tick CSV    header "t_s,midquote" (the library's own series format)
//   meta JSON   {ric, tick_size, session_open_ms, session_close_ms, currency}
#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "leadlag/types.hpp"

namespace leadlag {

// Row-level issues are collected here instead of aborting the parse; fatal
// problems (unreadable file, bad header, time running backwards beyond
// tolerance) throw DataError.
struct ParseReport {
  std::vector<std::string> warnings;
  std::size_t n_rows_skipped = 0;

  void warn(std::string msg) {
    warnings.push_back(std::move(msg));
    ++n_rows_skipped;
  }
};

struct ParseOptions {
  // Rows may step back in time by at most this much before the file is
  // rejected; smaller inversions are sorted away.
  Milliseconds backwards_tolerance_ms = 0;
};

std::vector<TradeEvent> parse_trades(const std::filesystem::path& path,
                                     const InstrumentMeta& meta, ParseReport& report,
                                     const ParseOptions& opts = {});

std::vector<QuoteEvent> parse_quotes(const std::filesystem::path& path,
                                     const InstrumentMeta& meta, ParseReport& report,
                                     const ParseOptions& opts = {});

void serialize_trades(const std::filesystem::path& path, std::span<const TradeEvent> trades);
void serialize_quotes(const std::filesystem::path& path, std::span<const QuoteEvent> quotes);

InstrumentMeta parse_meta(const std::filesystem::path& path);

TickSeries read_tick_series(const std::filesystem::path& path);
void write_tick_series(const std::filesystem::path& path, const TickSeries& series);

// Collapse same-timestamp fills into one VWAP event. The trade_through flag
// is set when the pre-aggregation group has at least two different
// consecutive execution prices.
std::vector<TradeEvent> aggregate_same_timestamp(std::span<const TradeEvent> trades);

// Trading window after dropping the first and last half hours,
// [open + 30min, close - 30min], both ends included.
struct SessionWindow {
  Milliseconds begin_ms = 0;
  Milliseconds end_ms = 0;

  bool contains(Milliseconds ts) const { return ts >= begin_ms && ts <= end_ms; }
};

SessionWindow trimmed_session(const InstrumentMeta& meta);

// Overlap of two instruments' trimmed sessions (cross-exchange pairs use
// only simultaneous trading hours).
SessionWindow intersect_sessions(const SessionWindow& a, const SessionWindow& b);

template <typename Event>
std::vector<Event> session_filter(std::span<const Event> events, const SessionWindow& window) {
  std::vector<Event> out;
  out.reserve(events.size());
  for (const auto& e : events)
    if (window.contains(e.ts_ms)) out.push_back(e);
  return out;
}

template <typename Event>
std::vector<Event> session_filter(std::span<const Event> events, const InstrumentMeta& meta) {
  return session_filter(events, trimmed_session(meta));
}

// Midquote prevailing at each trade: the last quote strictly before the
// trade's timestamp. Trades with no preceding quote are dropped with a
// warning (no look-ahead).
std::vector<MidquoteSample> build_midquote_series(std::span<const QuoteEvent> quotes,
                                                  std::span<const TradeEvent> trades,
                                                  ParseReport& report);

// Event clock: an epoch whenever the midquote has moved by at least
// theta_ticks * tick_size since the previous epoch. theta_ticks = 0 selects
// standard tick time (any non-zero variation).
TickSeries to_tick_time(std::span<const MidquoteSample> midquotes, double theta_ticks,
                        double tick_size);
TickSeries to_tick_time(const TickSeries& series, double theta_ticks, double tick_size);

}  // namespace leadlag
