// cli.cpp
#include "leadlag/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "leadlag/forecast.hpp"
#include "leadlag/hycorr.hpp"
#include "leadlag/liquidity.hpp"
#include "leadlag/network.hpp"
#include "leadlag/parallel.hpp"
#include "leadlag/response.hpp"
#include "leadlag/simkit.hpp"
#include "leadlag/tickdata.hpp"

namespace leadlag {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic serialization: every float is rounded to 12 significant
// digits before it reaches an artifact.
// ---------------------------------------------------------------------------

std::string format12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(format12(v).c_str(), nullptr); }

json num12(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

json num12(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return num12(*v);
}

std::uint64_t fnv1a64_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash input: " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char chunk[65536];
  while (in.read(chunk, sizeof chunk) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(chunk[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

class Manifest {
 public:
  Manifest(const RunConfig& config, json parameters)
      : out_dir_(config.out_dir), subcommand_(config.subcommand) {
    doc_["subcommand"] = config.subcommand;
    doc_["parameters"] = std::move(parameters);
    doc_["inputs"] = json::array();
    doc_["artifacts"] = json::array();
  }

  void add_input(const std::string& path) {
    doc_["inputs"].push_back(
        {{"path", path}, {"fnv1a64", fnv1a64_file(path)}});
  }

  fs::path artifact(const std::string& name) {
    const fs::path p = fs::path(out_dir_) / name;
    doc_["artifacts"].push_back(p.string());
    return p;
  }

  void write() {
    const fs::path p = fs::path(out_dir_) / ("manifest-" + subcommand_ + ".json");
    std::ofstream out(p);
    if (!out) throw DataError("cannot write manifest: " + p.string());
    out << doc_.dump(2) << '\n';
  }

 private:
  std::string out_dir_;
  std::string subcommand_;
  json doc_;
};

void ensure_out_dir(const RunConfig& config) {
  if (config.out_dir.empty()) throw std::invalid_argument("empty output path");
  fs::create_directories(config.out_dir);
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

struct LoadedLeg {
  InstrumentMeta meta;
  std::vector<TickSeries> days;                 // tick-time series per day
  std::vector<std::vector<QuoteEvent>> quotes;  // session-filtered quotes per day
  std::vector<MarketDay> market_days;           // aggregated trades + quotes
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

// trades+quotes+meta for one instrument: aggregate, session-filter and build
// the tick-time series per day.
LoadedLeg load_leg_from_market_data(const std::vector<std::string>& trades_files,
                                    const std::vector<std::string>& quotes_files,
                                    const std::string& meta_file, double tick_theta,
                                    const SessionWindow* common_window, Manifest* manifest) {
  require(!meta_file.empty(), "missing instrument meta file");
  require(trades_files.size() == quotes_files.size(),
          "trades/quotes day counts differ");
  LoadedLeg leg;
  leg.meta = parse_meta(meta_file);
  if (manifest) manifest->add_input(meta_file);
  const SessionWindow window =
      common_window ? *common_window : trimmed_session(leg.meta);
  for (std::size_t d = 0; d < trades_files.size(); ++d) {
    ParseReport report;
    auto trades = parse_trades(trades_files[d], leg.meta, report);
    auto quotes = parse_quotes(quotes_files[d], leg.meta, report);
    if (manifest) {
      manifest->add_input(trades_files[d]);
      manifest->add_input(quotes_files[d]);
    }
    trades = aggregate_same_timestamp(trades);
    trades = session_filter<TradeEvent>(trades, window);
    quotes = session_filter<QuoteEvent>(quotes, window);
    const auto mids = build_midquote_series(quotes, trades, report);
    leg.days.push_back(to_tick_time(mids, tick_theta, leg.meta.tick_size));
    leg.market_days.push_back({trades, quotes});
    leg.quotes.push_back(std::move(quotes));
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
  return leg;
}

LoadedLeg load_leg_from_ticks(const std::vector<std::string>& tick_files,
                              const std::string& meta_file, Manifest* manifest) {
  LoadedLeg leg;
  if (!meta_file.empty()) {
    leg.meta = parse_meta(meta_file);
    if (manifest) manifest->add_input(meta_file);
  } else {
    leg.meta.ric = "TICKS";
    leg.meta.tick_size = 1.0;
  }
  for (const auto& f : tick_files) {
    leg.days.push_back(read_tick_series(f));
    leg.quotes.emplace_back();
    leg.market_days.emplace_back();
    if (manifest) manifest->add_input(f);
  }
  return leg;
}

struct LoadedPair {
  LoadedLeg x, y;
  std::vector<DayPair> days;
};

LoadedPair load_pair(const RunConfig& config, Manifest* manifest) {
  LoadedPair pair;
  const bool tick_mode = !config.x_ticks.empty() || !config.y_ticks.empty();
  if (tick_mode) {
    require(!config.x_ticks.empty() && !config.y_ticks.empty(),
            "both --x-ticks and --y-ticks are required in tick mode");
    require(config.x_ticks.size() == config.y_ticks.size(),
            "x/y tick day counts differ");
    pair.x = load_leg_from_ticks(config.x_ticks, config.x_meta, manifest);
    pair.y = load_leg_from_ticks(config.y_ticks, config.y_meta, manifest);
  } else {
    require(!config.x_trades.empty(), "no input files given");
    require(config.x_trades.size() == config.y_trades.size(),
            "x/y day counts differ");
    // Only simultaneous trading hours enter the pair analysis.
    const auto wx = trimmed_session(parse_meta(config.x_meta));
    const auto wy = trimmed_session(parse_meta(config.y_meta));
    const auto common = intersect_sessions(wx, wy);
    pair.x = load_leg_from_market_data(config.x_trades, config.x_quotes, config.x_meta, 0.0,
                                       &common, manifest);
    pair.y = load_leg_from_market_data(config.y_trades, config.y_quotes, config.y_meta, 0.0,
                                       &common, manifest);
  }
  for (std::size_t d = 0; d < pair.x.days.size(); ++d)
    pair.days.push_back({pair.x.days[d], pair.y.days[d]});
  return pair;
}

LagGrid grid_from_config(const RunConfig& config) {
  LagGrid grid = config.lag_grid_positive.empty()
                     ? LagGrid::standard()
                     : LagGrid::from_positive(config.lag_grid_positive);
  if (config.max_lag_s > 0.0) {
    std::vector<double> kept;
    for (double l : grid.lags)
      if (l > 0.0 && l <= config.max_lag_s) kept.push_back(l);
    require(!kept.empty(), "max lag leaves an empty grid");
    grid = LagGrid::from_positive(kept);
  }
  return grid;
}

// Reporting-layer clipping to [-1, 1]; the stored curve keeps raw values.
struct ClippedCurve {
  std::vector<std::optional<double>> rho;
  std::size_t n_clipped = 0;
};

ClippedCurve clip_for_report(const CrossCorrelationCurve& curve) {
  ClippedCurve out;
  out.rho = curve.rho;
  for (auto& v : out.rho) {
    if (!v.has_value()) continue;
    if (*v > 1.0 || *v < -1.0) {
      *v = std::clamp(*v, -1.0, 1.0);
      ++out.n_clipped;
    }
  }
  return out;
}

CrossCorrelationCurve parallel_plain_curve(std::span<const DayPair> days, const LagGrid& grid,
                                           unsigned jobs) {
  std::vector<std::optional<std::vector<std::optional<double>>>> rows(days.size());
  parallel_for(days.size(), jobs, [&](std::size_t i) {
    const auto one = cross_correlation_curve(days[i].x, days[i].y, grid);
    if (one.n_days == 1) rows[i] = one.per_day[0];
  });
  std::vector<std::vector<std::optional<double>>> kept;
  std::size_t skipped = 0;
  for (auto& r : rows) {
    if (r.has_value())
      kept.push_back(std::move(*r));
    else
      ++skipped;
  }
  return assemble_curve(grid, std::move(kept), skipped);
}

json curve_to_json(const CrossCorrelationCurve& curve) {
  const auto clipped = clip_for_report(curve);
  json out;
  out["grid"] = json::array();
  out["rho_mean"] = json::array();
  out["ci95"] = json::array();
  out["n_days_per_lag"] = json::array();
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    out["grid"].push_back(num12(curve.grid.lags[k]));
    out["rho_mean"].push_back(num12(clipped.rho[k]));
    out["ci95"].push_back(num12(curve.ci95[k]));
    out["n_days_per_lag"].push_back(curve.n_days_per_lag[k]);
  }
  out["n_days"] = curve.n_days;
  out["n_days_skipped"] = curve.n_days_skipped;
  out["n_clipped"] = clipped.n_clipped;
  return out;
}

void write_curve_csv(const fs::path& path, const CrossCorrelationCurve& curve) {
  const auto clipped = clip_for_report(curve);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "lag_s,rho_mean,ci95,n_days\n";
  for (std::size_t k = 0; k < curve.grid.size(); ++k) {
    out << format12(curve.grid.lags[k]) << ',';
    if (clipped.rho[k].has_value())
      out << format12(*clipped.rho[k]);
    out << ',' << format12(curve.ci95[k]) << ',' << curve.n_days_per_lag[k] << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

json config_parameters(const RunConfig& c) {
  json p;
  p["seed"] = c.seed;
  p["jobs"] = c.jobs;
  p["format"] = c.format;
  if (!c.lag_grid_positive.empty()) {
    p["lag_grid_positive"] = json::array();
    for (double l : c.lag_grid_positive) p["lag_grid_positive"].push_back(num12(l));
  }
  if (c.max_lag_s > 0.0) p["max_lag_s"] = num12(c.max_lag_s);
  return p;
}

void run_ingest(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  const auto leg = load_leg_from_market_data(config.x_trades, config.x_quotes, config.x_meta,
                                             config.tick_theta, nullptr, &manifest);
  for (std::size_t d = 0; d < leg.days.size(); ++d) {
    const auto path =
        manifest.artifact(leg.meta.ric + "_day" + std::to_string(d) + ".ticks");
    write_tick_series(path, leg.days[d]);
  }
  manifest.write();
}

void run_stats(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  const auto leg = load_leg_from_market_data(config.x_trades, config.x_quotes, config.x_meta,
                                             0.0, nullptr, &manifest);
  const auto stats = compute_liquidity_stats(leg.market_days, leg.meta);
  const auto path = manifest.artifact("stats.csv");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "ric,mean_intertrade_s,tick_over_mid_bp,spread_in_ticks,unit_spread_freq,"
         "trade_through_freq,vol_in_ticks,turnover_per_trade,currency\n";
  auto field = [&](const std::optional<double>& v) {
    return v.has_value() ? format12(*v) : std::string();
  };
  out << leg.meta.ric << ',' << format12(stats.mean_intertrade_s) << ','
      << field(stats.tick_over_mid_bp) << ',' << field(stats.spread_in_ticks) << ','
      << field(stats.unit_spread_freq) << ',' << format12(stats.trade_through_freq) << ','
      << field(stats.vol_in_ticks) << ',' << format12(stats.turnover_per_trade) << ','
      << leg.meta.currency << '\n';
  manifest.write();
}

json summary_to_json(const LeadLagSummary& summary) {
  json out;
  out["llr"] = num12(summary.llr);
  out["max_corr"] = num12(std::clamp(summary.max_corr, -1.0, 1.0));
  out["max_lag_s"] = num12(summary.max_lag_s);
  out["max_lag_sd"] = num12(summary.max_lag_sd);
  return out;
}

void run_xcorr(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  const auto pair = load_pair(config, &manifest);
  const auto grid = grid_from_config(config);
  const auto curve = parallel_plain_curve(pair.days, grid, config.jobs);
  require(curve.n_days > 0, "no usable day");

  SummaryOptions sopts;
  sopts.argmax_abs = config.use_abs_argmax;
  const auto summary = extract_summary(curve, sopts);

  json out;
  out["pair"] = pair.x.meta.ric + "/" + pair.y.meta.ric;
  out.update(curve_to_json(curve));
  out["llr"] = num12(summary.llr);
  out["llr_reversed"] = num12(1.0 / summary.llr);
  out["max_corr"] = num12(std::clamp(summary.max_corr, -1.0, 1.0));
  out["max_lag_s"] = num12(summary.max_lag_s);
  out["max_lag_sd"] = num12(summary.max_lag_sd);
  {
    const auto daily = daily_llrs(curve);
    if (!daily.empty()) {
      const auto band = stats::daily_band(daily);
      out["llr_daily_mean"] = num12(band.mean);
      out["llr_daily_ci95"] = num12(band.half_width95);
    }
  }
  const auto path = manifest.artifact("xcorr.json");
  std::ofstream json_out(path);
  json_out << out.dump(2) << '\n';
  if (config.format == "csv") write_curve_csv(manifest.artifact("xcorr.csv"), curve);
  manifest.write();
}

void run_intraday(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  const auto pair = load_pair(config, &manifest);

  double begin_s = 0.0, end_s = 0.0;
  if (!config.x_meta.empty() && config.x_ticks.empty()) {
    const auto w = intersect_sessions(trimmed_session(pair.x.meta),
                                      trimmed_session(pair.y.meta));
    begin_s = ms_to_s(w.begin_ms);
    end_s = ms_to_s(w.end_ms);
  } else {
    // Tick mode: span of the data.
    begin_s = std::numeric_limits<double>::infinity();
    end_s = -std::numeric_limits<double>::infinity();
    for (const auto& day : pair.days) {
      if (day.x.empty() || day.y.empty()) continue;
      begin_s = std::min({begin_s, day.x.t.front(), day.y.t.front()});
      end_s = std::max({end_s, day.x.t.back(), day.y.t.back()});
    }
    require(begin_s < end_s, "no data to slice");
  }

  const double max_lag = config.max_lag_s > 0.0 ? config.max_lag_s : 60.0;
  SummaryOptions sopts;
  sopts.argmax_abs = config.use_abs_argmax;
  const auto profile =
      intraday_profile(pair.days, begin_s, end_s, config.slice_minutes, max_lag, sopts);

  const auto path = manifest.artifact("intraday.csv");
  std::ofstream out(path);
  out << "slice_begin_s,slice_end_s,n_days,llr,max_corr,max_lag_s,max_lag_sd\n";
  for (const auto& slice : profile) {
    out << format12(slice.begin_s) << ',' << format12(slice.end_s) << ','
        << slice.curve.n_days;
    if (slice.summary.has_value()) {
      out << ',' << format12(slice.summary->llr) << ','
          << format12(std::clamp(slice.summary->max_corr, -1.0, 1.0)) << ','
          << format12(slice.summary->max_lag_s) << ',' << format12(slice.summary->max_lag_sd);
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  manifest.write();
}

void run_threshold(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  const auto pair = load_pair(config, &manifest);
  const auto grid = grid_from_config(config);
  require(!config.thresholds.empty(), "no thresholds given (use --theta)");

  const auto csv_path = manifest.artifact("threshold.csv");
  std::ofstream out(csv_path);
  out << "theta,lag_s,rho_mean,ci95,n_days\n";
  json summaries = json::array();
  for (double theta : config.thresholds) {
    const auto curve = thresholded_curve(pair.days, grid, theta);
    const auto clipped = clip_for_report(curve);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      out << format12(theta) << ',' << format12(grid.lags[k]) << ',';
      if (clipped.rho[k].has_value()) out << format12(*clipped.rho[k]);
      out << ',' << format12(curve.ci95[k]) << ',' << curve.n_days_per_lag[k] << '\n';
    }
    json s;
    s["theta"] = num12(theta);
    s["rho0_threshold_x"] = num12(curve.rho0_threshold_x);
    s["rho0_threshold_y"] = num12(curve.rho0_threshold_y);
    try {
      SummaryOptions sopts;
      sopts.argmax_abs = config.use_abs_argmax;
      const auto summary = extract_summary(curve, sopts);
      s.update(summary_to_json(summary));
    } catch (const std::exception&) {
      // too few non-null lags at this theta; emit the nulls only
    }
    summaries.push_back(std::move(s));
  }
  const auto json_path = manifest.artifact("threshold_summary.json");
  std::ofstream json_out(json_path);
  json_out << summaries.dump(2) << '\n';
  manifest.write();
}

void run_response(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  // Leader tick series from either tick files or market data; the lagger
  // needs its continuous quote stream.
  require(!config.y_quotes.empty(), "response needs --y-quotes");
  require(!config.y_meta.empty(), "response needs --y-meta");
  LoadedLeg leader;
  if (!config.x_ticks.empty()) {
    leader = load_leg_from_ticks(config.x_ticks, config.x_meta, &manifest);
    require(!config.x_meta.empty(), "response needs --x-meta for the tick size");
  } else {
    leader = load_leg_from_market_data(config.x_trades, config.x_quotes, config.x_meta, 0.0,
                                       nullptr, &manifest);
  }
  const InstrumentMeta lagger_meta = parse_meta(config.y_meta);
  manifest.add_input(config.y_meta);
  require(config.y_quotes.size() == leader.days.size(),
          "leader/lagger day counts differ");

  std::vector<ResponseDay> days;
  for (std::size_t d = 0; d < leader.days.size(); ++d) {
    ParseReport report;
    auto quotes = parse_quotes(config.y_quotes[d], lagger_meta, report);
    manifest.add_input(config.y_quotes[d]);
    quotes = session_filter<QuoteEvent>(quotes, trimmed_session(lagger_meta));
    days.push_back({leader.days[d], std::move(quotes)});
  }

  ResponseOptions opts = ResponseOptions::defaults();
  if (!config.theta_halfticks.empty()) opts.thetas_halfticks = config.theta_halfticks;
  opts.max_lag_s = config.response_max_lag_s;
  const auto curves =
      response_curves(days, leader.meta.tick_size, lagger_meta.tick_size, opts);

  const auto path = manifest.artifact("response.csv");
  std::ofstream out(path);
  out << "variable,theta_halfticks,lag_s,mean_dev_ticks,n\n";
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.lags.size(); ++k) {
      out << to_string(c.variable) << ',' << c.theta_halfticks << ','
          << format12(c.lags[k]) << ',';
      if (c.values[k].has_value()) out << format12(*c.values[k]);
      out << ',' << c.counts[k] << '\n';
    }
  }
  manifest.write();
}

Execution execution_from(const std::string& name) {
  if (name == "midquote") return Execution::midquote;
  if (name == "cross_spread") return Execution::cross_spread;
  throw std::invalid_argument("unknown execution: " + name);
}

void run_backtest(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  require(!config.x_trades.empty() || !config.x_ticks.empty(), "no input files");

  const auto pair = load_pair(config, &manifest);
  std::vector<BacktestDay> days;
  for (std::size_t d = 0; d < pair.days.size(); ++d)
    days.push_back({pair.days[d].x, pair.days[d].y, pair.y.quotes[d]});

  BacktestOptions opts;
  opts.window_days = config.window_days;
  if (!config.lag_grid_positive.empty())
    opts.calibration.positive_lags = config.lag_grid_positive;
  opts.execution = execution_from(config.execution);
  opts.kind = ForecastKind::leadlag;
  opts.seed = config.seed;
  const auto report = backtest(days, opts);

  BacktestOptions bench_opts = opts;
  bench_opts.kind = config.benchmark == "autocorrelation" ? ForecastKind::autocorrelation
                                                          : ForecastKind::random;
  const auto bench = backtest(days, bench_opts);
  const auto cmp = compare_reports(report, bench);

  json out;
  out["pair"] = json::array();
  out["accuracy"] = num12(report.accuracy);
  out["n_trades"] = report.n_trades;
  out["n_abstained"] = report.n_abstained;
  out["n_skipped_no_quote"] = report.n_skipped_no_quote;
  out["mean_return_bp"] = num12(report.mean_return_bp);
  out["daily_return_mean"] = num12(report.daily_return_mean);
  out["daily_return_sd"] = num12(report.daily_return_sd);
  out["sharpe_annualized"] = num12(report.sharpe_annualized);
  out["benchmark"] = config.benchmark;
  out["benchmark_accuracy"] = num12(bench.accuracy);
  out["ks_distance_vs_benchmark"] = num12(cmp.ks_distance);
  out["ks_pvalue"] = num12(cmp.ks_pvalue);
  out["t_stat_vs_benchmark"] = num12(cmp.t_stat);
  out["t_pvalue"] = num12(cmp.t_pvalue);
  if (config.benchmark == "random") out["ks_distance_vs_random"] = num12(cmp.ks_distance);
  if (!config.coarse_thetas.empty()) {
    const auto sweep = coarse_tick_sweep(days, config.coarse_thetas,
                                         pair.y.meta.tick_size, opts);
    json sweep_json = json::array();
    for (const auto& [theta, r] : sweep) {
      json row;
      row["theta_ticks"] = num12(theta);
      row["accuracy"] = num12(r.accuracy);
      row["n_trades"] = r.n_trades;
      row["mean_return_bp"] = num12(r.mean_return_bp);
      sweep_json.push_back(std::move(row));
    }
    out["coarse_tick_sweep"] = std::move(sweep_json);
  }

  const auto json_path = manifest.artifact("backtest.json");
  std::ofstream json_out(json_path);
  json_out << out.dump(2) << '\n';

  const auto trades_path = manifest.artifact("trades.csv");
  std::ofstream trades_out(trades_path);
  trades_out << "epoch_ts_s,forecast,realized_sign,return,execution\n";
  for (const auto& t : report.trades)
    trades_out << format12(t.ts_s) << ',' << t.forecast << ',' << t.realized << ','
               << format12(t.ret) << ',' << config.execution << '\n';
  manifest.write();
}

void run_simulate(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  require(!config.lambda2.empty(), "simulate needs at least one --lambda2");

  const LagGrid grid =
      config.max_lag_s > 0.0 ? LagGrid::truncated(config.max_lag_s) : LagGrid::truncated(60.0);
  // The previous-tick estimator lives on multiples of its sampling mesh;
  // sub-mesh lags would all collapse onto lag 0.
  std::vector<double> pt_positive;
  for (double l = config.pt_mesh_s; l <= grid.lags.back() + 1e-9; l += config.pt_mesh_s)
    pt_positive.push_back(l);
  require(!pt_positive.empty(), "previous-tick mesh exceeds the lag grid");
  const LagGrid pt_grid = LagGrid::from_positive(pt_positive);
  json llr_table = json::array();
  for (double l2 : config.lambda2) {
    SimConfig cfg;
    cfg.lambda1 = config.lambda1;
    cfg.lambda2 = l2;
    cfg.rho = config.rho;
    cfg.T_s = config.T_s;
    cfg.mesh_s = config.mesh_s;
    cfg.seed = config.seed;
    cfg.n_reps = config.n_reps;
    cfg.validate();

    std::vector<DayPair> reps(static_cast<std::size_t>(cfg.n_reps));
    parallel_for(reps.size(), config.jobs, [&](std::size_t r) {
      reps[r] = generate_poisson_pair(cfg, static_cast<std::uint64_t>(r));
    });
    const auto hy = parallel_plain_curve(reps, grid, config.jobs);
    const auto pt = previous_tick_curve(reps, pt_grid, config.pt_mesh_s);

    const std::string tag = format12(l2);
    write_curve_csv(manifest.artifact("sim_hy_lambda2_" + tag + ".csv"), hy);
    write_curve_csv(manifest.artifact("sim_pt_lambda2_" + tag + ".csv"), pt);

    json row;
    row["lambda1"] = num12(cfg.lambda1);
    row["lambda2"] = num12(l2);
    row["hy_rho0"] = num12(hy.rho[hy.lag_index(0.0)]);
    row["pt_rho0"] = num12(pt.rho[pt.lag_index(0.0)]);
    row["hy_llr"] = num12(llr(hy));
    row["pt_llr"] = num12(llr(pt));
    llr_table.push_back(std::move(row));
  }
  const auto path = manifest.artifact("sim_llr.json");
  std::ofstream out(path);
  out << llr_table.dump(2) << '\n';
  manifest.write();
}

void run_oracle(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  require(config.lambda2.size() == 1, "oracle needs exactly one --lambda2");
  const double l2 = config.lambda2.front();

  const auto path = manifest.artifact("oracle.csv");
  std::ofstream out(path);
  out << "lag_s,expected_cov,mc_mean,mc_stderr,z\n";
  for (double lag : config.oracle_lags) {
    const auto oracle =
        oracle_expected_cov(config.lambda1, l2, config.rho, config.T_s, lag);
    out << format12(lag) << ',' << format12(oracle.expected_cov);
    if (config.mc_reps > 0) {
      const auto mc = expectation_brute_force(config.lambda1, l2, config.rho, config.T_s, lag,
                                              config.mc_reps, config.seed);
      const double z =
          mc.stderr > 0.0 ? (mc.mean - oracle.expected_cov) / mc.stderr : 0.0;
      out << ',' << format12(mc.mean) << ',' << format12(mc.stderr) << ',' << format12(z);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  manifest.write();
}

void run_surrogate(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  require(config.x_ticks.size() == config.y_ticks.size() && !config.x_ticks.empty(),
          "surrogate needs paired --x-ticks/--y-ticks");
  for (std::size_t d = 0; d < config.x_ticks.size(); ++d) {
    const auto x = read_tick_series(config.x_ticks[d]);
    const auto y = read_tick_series(config.y_ticks[d]);
    manifest.add_input(config.x_ticks[d]);
    manifest.add_input(config.y_ticks[d]);
    // rho defaults to the pair's own HY correlation at lag zero.
    double rho = config.rho;
    if (std::isnan(rho)) rho = std::clamp(hy_correlation(x, y, 0.0), -1.0, 1.0);
    const auto surrogate = generate_surrogate(x, y, rho, config.surrogate_mesh_s,
                                              config.seed + d);
    write_tick_series(manifest.artifact("surrogate_x_day" + std::to_string(d) + ".ticks"),
                      surrogate.x);
    write_tick_series(manifest.artifact("surrogate_y_day" + std::to_string(d) + ".ticks"),
                      surrogate.y);
  }
  manifest.write();
}

void run_network(const RunConfig& config) {
  Manifest manifest(config, config_parameters(config));
  std::vector<PairSummary> pairs;

  if (!config.pairs_csv.empty()) {
    manifest.add_input(config.pairs_csv);
    std::ifstream in(config.pairs_csv);
    if (!in) throw DataError("cannot open " + config.pairs_csv);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == "a,b,max_corr,llr", "pairs CSV header must be a,b,max_corr,llr");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      PairSummary p;
      std::size_t pos = 0;
      auto next = [&]() {
        const auto comma = line.find(',', pos);
        const auto field = line.substr(pos, comma - pos);
        pos = comma == std::string::npos ? line.size() : comma + 1;
        return field;
      };
      auto next_number = [&]() {
        const auto field = next();
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size())
          throw DataError(config.pairs_csv + ":" + std::to_string(line_no) +
                          ": bad numeric field '" + field + "'");
        return v;
      };
      p.a = next();
      p.b = next();
      p.max_corr = next_number();
      p.llr = next_number();
      if (p.a.empty() || p.b.empty())
        throw DataError(config.pairs_csv + ":" + std::to_string(line_no) + ": empty node name");
      pairs.push_back(std::move(p));
    }
  } else {
    require(!config.instrument_ticks.empty(), "network needs --ticks NAME=path or --pairs");
    std::map<std::string, std::vector<TickSeries>> instruments;
    for (const auto& entry : config.instrument_ticks) {
      const auto eq = entry.find('=');
      require(eq != std::string::npos, "--ticks entries must be NAME=path");
      const auto name = entry.substr(0, eq);
      const auto path = entry.substr(eq + 1);
      manifest.add_input(path);
      instruments[name].push_back(read_tick_series(path));
    }
    require(instruments.size() >= 2, "network needs at least two instruments");
    const auto grid = grid_from_config(config);
    std::vector<std::pair<std::string, std::string>> names;
    for (auto a = instruments.begin(); a != instruments.end(); ++a)
      for (auto b = std::next(a); b != instruments.end(); ++b)
        names.push_back({a->first, b->first});
    std::vector<PairSummary> computed(names.size());
    parallel_for(names.size(), config.jobs, [&](std::size_t i) {
      const auto& [na, nb] = names[i];
      const auto& da = instruments.at(na);
      const auto& db = instruments.at(nb);
      require(da.size() == db.size(), "instrument day counts differ");
      std::vector<DayPair> days;
      for (std::size_t d = 0; d < da.size(); ++d) days.push_back({da[d], db[d]});
      const auto curve = cross_correlation_curve(days, grid);
      SummaryOptions sopts;
      sopts.argmax_abs = config.use_abs_argmax;
      const auto summary = extract_summary(curve, sopts);
      const double corr = config.edge_corr == "zero"
                              ? curve.rho[curve.lag_index(0.0)].value_or(0.0)
                              : summary.max_corr;
      computed[i] = {na, nb, corr, summary.llr};
    });
    pairs = std::move(computed);
  }

  const auto graph = build_mst(pairs);
  const auto edges_path = manifest.artifact("network_edges.csv");
  std::ofstream edges(edges_path);
  edges << "from,to,rho,llr,undirected\n";
  for (const auto& e : graph.edges)
    edges << e.from << ',' << e.to << ',' << format12(e.rho) << ',' << format12(e.llr) << ','
          << (e.undirected ? 1 : 0) << '\n';

  // Plain digraph description for external layout tools.
  const auto dot_path = manifest.artifact("network.txt");
  std::ofstream dot(dot_path);
  dot << "digraph leadlag {\n";
  for (const auto& n : graph.nodes) dot << "  \"" << n << "\";\n";
  for (const auto& e : graph.edges) {
    dot << "  \"" << e.from << "\" -> \"" << e.to << "\" [rho=" << format12(e.rho)
        << ", llr=" << format12(e.llr);
    if (e.undirected) dot << ", dir=none";
    dot << "];\n";
  }
  dot << "}\n";
  manifest.write();
}

void validate_only(const RunConfig& config) {
  // Dry run: check that the inputs exist and parse, then stop.
  auto check_files = [](const std::vector<std::string>& files) {
    for (const auto& f : files)
      if (!fs::exists(f)) throw DataError("missing input: " + f);
  };
  check_files(config.x_trades);
  check_files(config.x_quotes);
  check_files(config.y_trades);
  check_files(config.y_quotes);
  check_files(config.x_ticks);
  check_files(config.y_ticks);
  for (const auto& entry : config.instrument_ticks) {
    const auto eq = entry.find('=');
    require(eq != std::string::npos, "--ticks entries must be NAME=path");
    if (!fs::exists(entry.substr(eq + 1)))
      throw DataError("missing input: " + entry.substr(eq + 1));
  }
  if (!config.pairs_csv.empty() && !fs::exists(config.pairs_csv))
    throw DataError("missing input: " + config.pairs_csv);
  if (!config.x_meta.empty()) parse_meta(config.x_meta);
  if (!config.y_meta.empty()) parse_meta(config.y_meta);
  if (!config.lag_grid_positive.empty()) LagGrid::from_positive(config.lag_grid_positive);
  if (config.subcommand == "simulate" || config.subcommand == "oracle") {
    for (double l2 : config.lambda2) {
      SimConfig cfg;
      cfg.lambda1 = config.lambda1;
      cfg.lambda2 = l2;
      cfg.rho = config.rho;
      cfg.T_s = config.T_s;
      cfg.mesh_s = config.mesh_s;
      cfg.n_reps = std::max(1, config.n_reps);
      cfg.validate();
    }
  }
  std::fprintf(stderr, "dry run ok: %s\n", config.subcommand.c_str());
}

}  // namespace

void run(const RunConfig& config) {
  if (config.dry_run) {
    validate_only(config);
    return;
  }
  ensure_out_dir(config);
  if (config.subcommand == "ingest")
    run_ingest(config);
  else if (config.subcommand == "stats")
    run_stats(config);
  else if (config.subcommand == "xcorr")
    run_xcorr(config);
  else if (config.subcommand == "intraday")
    run_intraday(config);
  else if (config.subcommand == "threshold")
    run_threshold(config);
  else if (config.subcommand == "response")
    run_response(config);
  else if (config.subcommand == "backtest")
    run_backtest(config);
  else if (config.subcommand == "simulate")
    run_simulate(config);
  else if (config.subcommand == "oracle")
    run_oracle(config);
  else if (config.subcommand == "surrogate")
    run_surrogate(config);
  else if (config.subcommand == "network")
    run_network(config);
  else
    throw std::invalid_argument("unknown subcommand: " + config.subcommand);
}

int run_with_exit_code(const RunConfig& config) {
  try {
    run(config);
    return 0;
  } catch (const NumericGuardError& e) {
    std::fprintf(stderr, "numerical guard: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace leadlag
