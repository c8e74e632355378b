// tickdata.cpp
#include "leadlag/tickdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string_view>

#include <nlohmann/json.hpp>

namespace leadlag {

namespace {

constexpr Milliseconds kHalfHourMs = 30LL * 60 * 1000;

std::vector<std::string_view> split_csv(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

bool parse_int(std::string_view s, Milliseconds& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Shared CSV walk: header check, per-row field split, monotonicity handling.
template <typename RowFn>
void parse_csv_file(const std::filesystem::path& path, std::string_view expected_header,
                    std::size_t n_fields, ParseReport& report, const ParseOptions& opts,
                    RowFn&& row_fn) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path.string());
  strip_cr(line);
  if (line != expected_header)
    throw DataError("bad header in " + path.string() + ": expected '" +
                    std::string(expected_header) + "', got '" + line + "'");

  std::vector<std::string_view> fields;
  std::size_t line_no = 1;
  Milliseconds prev_ts = std::numeric_limits<Milliseconds>::min();
  bool needs_sort = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    split_csv(line, fields);
    if (fields.size() != n_fields) {
      report.warn(path.string() + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(n_fields) + " fields, got " + std::to_string(fields.size()));
      continue;
    }
    Milliseconds ts;
    if (!parse_int(fields[0], ts)) {
      report.warn(path.string() + ":" + std::to_string(line_no) + ": bad ts_ms '" +
                  std::string(fields[0]) + "'");
      continue;
    }
    if (ts < prev_ts) {
      if (prev_ts - ts > opts.backwards_tolerance_ms)
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": timestamp runs backwards by " + std::to_string(prev_ts - ts) +
                        " ms (tolerance " + std::to_string(opts.backwards_tolerance_ms) + ")");
      needs_sort = true;
    }
    prev_ts = std::max(prev_ts, ts);
    row_fn(ts, fields, line_no);
  }
  if (needs_sort) report.warnings.push_back(path.string() + ": rows re-sorted by timestamp");
}

}  // namespace

std::vector<TradeEvent> parse_trades(const std::filesystem::path& path,
                                     const InstrumentMeta& meta, ParseReport& report,
                                     const ParseOptions& opts) {
  (void)meta;
  std::vector<TradeEvent> out;
  parse_csv_file(path, "ts_ms,price,qty", 3, report, opts,
                 [&](Milliseconds ts, const std::vector<std::string_view>& f, std::size_t line_no) {
                   TradeEvent ev;
                   ev.ts_ms = ts;
                   if (!parse_double(f[1], ev.price) || !parse_double(f[2], ev.qty)) {
                     report.warn(path.string() + ":" + std::to_string(line_no) +
                                 ": unparseable price/qty");
                     return;
                   }
                   if (!(ev.price > 0.0)) {
                     report.warn(path.string() + ":" + std::to_string(line_no) +
                                 ": non-positive price, row skipped");
                     return;
                   }
                   if (!(ev.qty > 0.0)) {
                     report.warn(path.string() + ":" + std::to_string(line_no) +
                                 ": non-positive qty, row skipped");
                     return;
                   }
                   out.push_back(ev);
                 });
  std::stable_sort(out.begin(), out.end(),
                   [](const TradeEvent& a, const TradeEvent& b) { return a.ts_ms < b.ts_ms; });
  return out;
}

std::vector<QuoteEvent> parse_quotes(const std::filesystem::path& path,
                                     const InstrumentMeta& meta, ParseReport& report,
                                     const ParseOptions& opts) {
  (void)meta;
  std::vector<QuoteEvent> out;
  parse_csv_file(path, "ts_ms,bid,bid_qty,ask,ask_qty", 5, report, opts,
                 [&](Milliseconds ts, const std::vector<std::string_view>& f, std::size_t line_no) {
                   QuoteEvent ev;
                   ev.ts_ms = ts;
                   if (!parse_double(f[1], ev.bid) || !parse_double(f[2], ev.bid_qty) ||
                       !parse_double(f[3], ev.ask) || !parse_double(f[4], ev.ask_qty)) {
                     report.warn(path.string() + ":" + std::to_string(line_no) +
                                 ": unparseable quote fields");
                     return;
                   }
                   if (!(ev.bid < ev.ask)) {
                     report.warn(path.string() + ":" + std::to_string(line_no) +
                                 ": crossed or locked book (bid >= ask), row skipped");
                     return;
                   }
                   out.push_back(ev);
                 });
  std::stable_sort(out.begin(), out.end(),
                   [](const QuoteEvent& a, const QuoteEvent& b) { return a.ts_ms < b.ts_ms; });
  return out;
}

void serialize_trades(const std::filesystem::path& path, std::span<const TradeEvent> trades) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "ts_ms,price,qty\n";
  for (const auto& t : trades)
    out << t.ts_ms << ',' << format_double(t.price) << ',' << format_double(t.qty) << '\n';
}

void serialize_quotes(const std::filesystem::path& path, std::span<const QuoteEvent> quotes) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "ts_ms,bid,bid_qty,ask,ask_qty\n";
  for (const auto& q : quotes)
    out << q.ts_ms << ',' << format_double(q.bid) << ',' << format_double(q.bid_qty) << ','
        << format_double(q.ask) << ',' << format_double(q.ask_qty) << '\n';
}

InstrumentMeta parse_meta(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad meta JSON in " + path.string() + ": " + e.what());
  }
  InstrumentMeta meta;
  try {
    meta.ric = j.at("ric").get<std::string>();
    meta.tick_size = j.at("tick_size").get<double>();
    meta.session_open_ms = j.at("session_open_ms").get<Milliseconds>();
    meta.session_close_ms = j.at("session_close_ms").get<Milliseconds>();
    meta.currency = j.value("currency", std::string("EUR"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("missing meta field in " + path.string() + ": " + e.what());
  }
  if (!(meta.tick_size > 0.0)) throw DataError(path.string() + ": tick_size must be > 0");
  if (meta.session_open_ms >= meta.session_close_ms)
    throw DataError(path.string() + ": session_open_ms must precede session_close_ms");
  return meta;
}

TickSeries read_tick_series(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path.string());
  strip_cr(line);
  if (line != "t_s,midquote")
    throw DataError("bad header in " + path.string() + ": expected 't_s,midquote'");
  TickSeries out;
  std::vector<std::string_view> fields;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    split_csv(line, fields);
    double t, m;
    if (fields.size() != 2 || !parse_double(fields[0], t) || !parse_double(fields[1], m))
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad tick row");
    out.push_back(t, m);
  }
  return out;
}

void write_tick_series(const std::filesystem::path& path, const TickSeries& series) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "t_s,midquote\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_double(series.t[i]) << ',' << format_double(series.m[i]) << '\n';
}

std::vector<TradeEvent> aggregate_same_timestamp(std::span<const TradeEvent> trades) {
  std::vector<TradeEvent> out;
  out.reserve(trades.size());
  std::size_t i = 0;
  while (i < trades.size()) {
    std::size_t j = i + 1;
    while (j < trades.size() && trades[j].ts_ms == trades[i].ts_ms) ++j;
    if (j == i + 1) {
      out.push_back(trades[i]);  // lone timestamp passes through untouched
      i = j;
      continue;
    }
    double notional = 0.0;
    double qty = 0.0;
    bool walked = false;
    for (std::size_t k = i; k < j; ++k) {
      notional += trades[k].price * trades[k].qty;
      qty += trades[k].qty;
      if (k > i && trades[k].price != trades[k - 1].price) walked = true;
    }
    TradeEvent ev;
    ev.ts_ms = trades[i].ts_ms;
    ev.price = notional / qty;
    ev.qty = qty;
    ev.trade_through = walked;
    out.push_back(ev);
    i = j;
  }
  return out;
}

SessionWindow trimmed_session(const InstrumentMeta& meta) {
  return {meta.session_open_ms + kHalfHourMs, meta.session_close_ms - kHalfHourMs};
}

SessionWindow intersect_sessions(const SessionWindow& a, const SessionWindow& b) {
  return {std::max(a.begin_ms, b.begin_ms), std::min(a.end_ms, b.end_ms)};
}

std::vector<MidquoteSample> build_midquote_series(std::span<const QuoteEvent> quotes,
                                                  std::span<const TradeEvent> trades,
                                                  ParseReport& report) {
  std::vector<MidquoteSample> out;
  out.reserve(trades.size());
  std::size_t q = 0;  // index of first quote with ts >= current trade ts
  std::size_t dropped = 0;
  for (const auto& trade : trades) {
    while (q < quotes.size() && quotes[q].ts_ms < trade.ts_ms) ++q;
    if (q == 0) {
      ++dropped;
      continue;  // no quote strictly before this trade
    }
    out.push_back({ms_to_s(trade.ts_ms), quotes[q - 1].mid()});
  }
  if (dropped > 0)
    report.warnings.push_back(std::to_string(dropped) +
                              " trade(s) before the first quote, dropped");
  return out;
}

TickSeries to_tick_time(std::span<const MidquoteSample> midquotes, double theta_ticks,
                        double tick_size) {
  if (theta_ticks < 0.0) throw std::invalid_argument("to_tick_time: theta_ticks < 0");
  if (!(tick_size > 0.0)) throw std::invalid_argument("to_tick_time: tick_size <= 0");
  // Decimal price grids are not binary-exact: a genuine one-tick move can land
  // half an ulp short of theta * tick_size, so the comparison gets a relative
  // slack.
  const double threshold = theta_ticks * tick_size * (1.0 - 1e-9);
  TickSeries out;
  for (const auto& s : midquotes) {
    if (out.empty()) {
      out.push_back(s.t_s, s.mid);
      continue;
    }
    const double move = std::abs(s.mid - out.m.back());
    const bool epoch = (threshold == 0.0) ? (move != 0.0) : (move >= threshold);
    if (epoch) out.push_back(s.t_s, s.mid);
  }
  return out;
}

TickSeries to_tick_time(const TickSeries& series, double theta_ticks, double tick_size) {
  std::vector<MidquoteSample> samples(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) samples[i] = {series.t[i], series.m[i]};
  return to_tick_time(samples, theta_ticks, tick_size);
}

}  // namespace leadlag
