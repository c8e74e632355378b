// hycorr.hpp: lagged Hayashi-Yoshida cross-correlation machinery.
//
// Conventions: increment i of a series spans the half-open interval
// ]t[i], t[i+1]]. The lag-ell estimator pairs X increments with Y intervals
// shifted back by ell, so ell > 0 measures "X now vs Y later" and the
// lead/lag ratio LLR > 1 means X leads Y.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "leadlag/types.hpp"

namespace leadlag {

struct LagGrid {
  std::vector<double> lags;  // strictly increasing, symmetric, contains 0

  // The default grid: 0.01..0.1 s step 0.01, 0.2..1 step 0.1, 2..10 step 1,
  // 15, 20, then 30..120 step 10 and 180, 240, 300, mirrored to negative
  // lags. Values are built on the millisecond grid.
  static LagGrid standard();
  // Positive lags capped at `max_lag_s` (used for intraday slices).
  static LagGrid truncated(double max_lag_s);
  static LagGrid from_positive(std::span<const double> positive_lags);

  void validate() const;
  std::size_t size() const { return lags.size(); }
};

// Raw lagged covariance sum  sum_{i,j} rX_i rY_j 1{overlap}.  Two-pointer
// sweep, O(n + m + #overlaps); the pair enumeration order equals the
// row-major double loop so the result is bit-identical to brute force.
double hy_covariance(const TickSeries& x, const TickSeries& y, double lag_s);

// sum_i r_i^2 over all increments.
double hy_sum_squares(const TickSeries& x);

// Lagged HY correlation: covariance over the product of root sums of
// squares. Values outside [-1, 1] are possible for lag != 0 and reported
// as-is; clipping is a reporting-layer concern.
double hy_correlation(const TickSeries& x, const TickSeries& y, double lag_s);

struct CrossCorrelationCurve {
  LagGrid grid;
  std::vector<std::optional<double>> rho;   // across-day mean, null if no day defined
  std::vector<double> ci95;                 // 1.96 sigma_D / sqrt(D) per lag
  std::vector<std::size_t> n_days_per_lag;
  std::size_t n_days = 0;          // days used
  std::size_t n_days_skipped = 0;  // < 2 increments (or zero variance) on a leg
  std::vector<std::vector<std::optional<double>>> per_day;

  // Thresholded estimator only: the two one-sided values at lag 0
  // (threshold applied to X resp. to Y).
  std::optional<double> rho0_threshold_x;
  std::optional<double> rho0_threshold_y;

  std::size_t lag_index(double lag_s) const;  // throws if absent
};

CrossCorrelationCurve cross_correlation_curve(std::span<const DayPair> days,
                                              const LagGrid& grid);
// Single-day convenience wrapper.
CrossCorrelationCurve cross_correlation_curve(const TickSeries& x, const TickSeries& y,
                                              const LagGrid& grid);

// Across-day reduction from per-day value rows (one row per usable day);
// callers that compute day rows in parallel feed them here in day order.
CrossCorrelationCurve assemble_curve(const LagGrid& grid,
                                     std::vector<std::vector<std::optional<double>>> per_day,
                                     std::size_t n_days_skipped);

// LLR = sum_{l>0} rho(l)^2 / sum_{l<0} rho(l)^2 on the raw grid (lag 0 and
// null lags excluded). Throws on a degenerate (zero) negative-lag sum.
double llr(const CrossCorrelationCurve& curve);

// Same ratio from one day's per-lag values; null when degenerate.
std::optional<double> llr_from_values(const LagGrid& grid,
                                      std::span<const std::optional<double>> values);

// Per-day LLR values for across-day confidence intervals (degenerate days
// skipped).
std::vector<double> daily_llrs(const CrossCorrelationCurve& curve);

// Thresholded estimator of section "extreme events": for l > 0 only leader
// increments with |r| >= theta enter (resp. the lagger for l < 0); the pair
// count and the one-sided scale factors follow the printed formulas
// verbatim. theta is in price units.
CrossCorrelationCurve thresholded_curve(std::span<const DayPair> days, const LagGrid& grid,
                                        double theta);

// Previous-tick comparison estimator: both legs last-value-interpolated on a
// regular grid of step mesh_s, then the ordinary lagged sample correlation;
// grid lags round to the nearest mesh multiple.
CrossCorrelationCurve previous_tick_curve(std::span<const DayPair> days, const LagGrid& grid,
                                          double mesh_s);

struct LeadLagSummary {
  double llr = 0.0;
  double max_corr = 0.0;
  double max_lag_s = 0.0;
  double max_lag_sd = 0.0;  // dispersion of the per-day maximum lag
};

struct SummaryOptions {
  double spline_mesh_s = 0.1;
  bool argmax_abs = false;  // maximize |rho| instead of rho
};

// Spline-interpolated maximum (natural cubic, knots at the raw grid,
// evaluated on the regular spline mesh; ties broken toward the smaller
// |lag|); LLR from raw grid values only.
LeadLagSummary extract_summary(const CrossCorrelationCurve& curve,
                               const SummaryOptions& opts = {});

struct IntradaySlice {
  double begin_s = 0.0;
  double end_s = 0.0;
  CrossCorrelationCurve curve;
  std::optional<LeadLagSummary> summary;  // null when the slice has no data
};

// Per-slice curves averaged across days; the last partial slice is dropped.
std::vector<IntradaySlice> intraday_profile(std::span<const DayPair> days,
                                            double session_begin_s, double session_end_s,
                                            double slice_minutes = 5.0,
                                            double max_lag_s = 60.0,
                                            const SummaryOptions& opts = {});

// Epochs with begin_s <= t <= end_s (increments between retained epochs).
TickSeries slice_series(const TickSeries& series, double begin_s, double end_s);

}  // namespace leadlag
