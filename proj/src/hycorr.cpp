// hycorr.cpp
#include "leadlag/hycorr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leadlag/stats.hpp"

namespace leadlag {

namespace {

// Overlap of ]t[i], t[i+1]] with ]s[j] - l, s[j+1] - l], written as two
// difference comparisons so that swapping the legs and negating the lag
// evaluates the exact same machine predicates (antisymmetry holds
// bit-for-bit).
inline bool overlaps(const std::vector<double>& t, std::size_t i, const std::vector<double>& s,
                     std::size_t j, double lag) {
  return (t[i] - s[j + 1] < -lag) && (s[j] - t[i + 1] < lag);
}

void require_increments(const TickSeries& x, const TickSeries& y) {
  if (x.n_increments() == 0 || y.n_increments() == 0)
    throw std::invalid_argument("hy estimator: no increments");
}

}  // namespace

double hy_covariance(const TickSeries& x, const TickSeries& y, double lag_s) {
  require_increments(x, y);
  const std::size_t nx = x.n_increments();
  const std::size_t ny = y.n_increments();
  double acc = 0.0;
  std::size_t j_lo = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    while (j_lo < ny && !(x.t[i] - y.t[j_lo + 1] < -lag_s)) ++j_lo;
    const double rx = x.increment(i);
    for (std::size_t j = j_lo; j < ny && (y.t[j] - x.t[i + 1] < lag_s); ++j)
      acc += rx * y.increment(j);
  }
  return acc;
}

double hy_sum_squares(const TickSeries& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.n_increments(); ++i) {
    const double r = x.increment(i);
    s += r * r;
  }
  return s;
}

double hy_correlation(const TickSeries& x, const TickSeries& y, double lag_s) {
  require_increments(x, y);
  const double sxx = hy_sum_squares(x);
  const double syy = hy_sum_squares(y);
  if (sxx <= 0.0 || syy <= 0.0)
    throw std::invalid_argument("hy_correlation: zero variance on a leg");
  return hy_covariance(x, y, lag_s) / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Lag grids
// ---------------------------------------------------------------------------

namespace {

std::vector<long> standard_positive_ms() {
  std::vector<long> ms;
  for (long v = 10; v <= 100; v += 10) ms.push_back(v);
  for (long v = 200; v <= 1000; v += 100) ms.push_back(v);
  for (long v = 2000; v <= 10000; v += 1000) ms.push_back(v);
  ms.push_back(15000);
  ms.push_back(20000);
  for (long v = 30000; v <= 120000; v += 10000) ms.push_back(v);
  ms.push_back(180000);
  ms.push_back(240000);
  ms.push_back(300000);
  return ms;
}

LagGrid grid_from_positive_ms(const std::vector<long>& ms) {
  LagGrid grid;
  grid.lags.reserve(2 * ms.size() + 1);
  for (auto it = ms.rbegin(); it != ms.rend(); ++it)
    grid.lags.push_back(-static_cast<double>(*it) / 1000.0);
  grid.lags.push_back(0.0);
  for (long v : ms) grid.lags.push_back(static_cast<double>(v) / 1000.0);
  grid.validate();
  return grid;
}

}  // namespace

LagGrid LagGrid::standard() { return grid_from_positive_ms(standard_positive_ms()); }

LagGrid LagGrid::truncated(double max_lag_s) {
  auto ms = standard_positive_ms();
  std::erase_if(ms, [&](long v) { return static_cast<double>(v) / 1000.0 > max_lag_s; });
  if (ms.empty()) throw std::invalid_argument("LagGrid::truncated: empty grid");
  return grid_from_positive_ms(ms);
}

LagGrid LagGrid::from_positive(std::span<const double> positive_lags) {
  LagGrid grid;
  for (double l : positive_lags) {
    if (!(l > 0.0)) throw std::invalid_argument("LagGrid::from_positive: lags must be > 0");
    grid.lags.push_back(l);
  }
  std::sort(grid.lags.begin(), grid.lags.end());
  std::vector<double> full;
  full.reserve(2 * grid.lags.size() + 1);
  for (auto it = grid.lags.rbegin(); it != grid.lags.rend(); ++it) full.push_back(-*it);
  full.push_back(0.0);
  for (double l : grid.lags) full.push_back(l);
  grid.lags = std::move(full);
  grid.validate();
  return grid;
}

void LagGrid::validate() const {
  if (lags.empty()) throw std::invalid_argument("LagGrid: empty");
  bool has_zero = false;
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (i > 0 && lags[i] <= lags[i - 1])
      throw std::invalid_argument("LagGrid: lags must be strictly increasing");
    if (lags[i] == 0.0) has_zero = true;
    const double mirror = -lags[i];
    if (!std::binary_search(lags.begin(), lags.end(), mirror))
      throw std::invalid_argument("LagGrid: grid must be symmetric about 0");
  }
  if (!has_zero) throw std::invalid_argument("LagGrid: must contain lag 0");
}

std::size_t CrossCorrelationCurve::lag_index(double lag_s) const {
  auto it = std::lower_bound(grid.lags.begin(), grid.lags.end(), lag_s);
  if (it == grid.lags.end() || *it != lag_s)
    throw std::invalid_argument("lag not on the grid");
  return static_cast<std::size_t>(it - grid.lags.begin());
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

namespace {

bool day_usable(const DayPair& day) {
  return day.x.n_increments() >= 2 && day.y.n_increments() >= 2 &&
         hy_sum_squares(day.x) > 0.0 && hy_sum_squares(day.y) > 0.0;
}

}  // namespace

CrossCorrelationCurve assemble_curve(const LagGrid& grid,
                                     std::vector<std::vector<std::optional<double>>> per_day,
                                     std::size_t n_days_skipped) {
  CrossCorrelationCurve curve;
  curve.grid = grid;
  const std::size_t n_lags = grid.size();
  curve.rho.assign(n_lags, std::nullopt);
  curve.ci95.assign(n_lags, 0.0);
  curve.n_days_per_lag.assign(n_lags, 0);
  curve.n_days = per_day.size();
  curve.n_days_skipped = n_days_skipped;

  std::vector<double> vals;
  for (std::size_t k = 0; k < n_lags; ++k) {
    vals.clear();
    for (const auto& day : per_day)
      if (day[k].has_value()) vals.push_back(*day[k]);
    curve.n_days_per_lag[k] = vals.size();
    if (!vals.empty()) {
      const auto band = stats::daily_band(vals);
      curve.rho[k] = band.mean;
      curve.ci95[k] = band.half_width95;
    }
  }
  curve.per_day = std::move(per_day);
  return curve;
}

CrossCorrelationCurve cross_correlation_curve(std::span<const DayPair> days,
                                              const LagGrid& grid) {
  grid.validate();
  std::vector<std::vector<std::optional<double>>> per_day;
  std::size_t skipped = 0;
  for (const auto& day : days) {
    if (!day_usable(day)) {
      ++skipped;
      continue;
    }
    const double denom = std::sqrt(hy_sum_squares(day.x) * hy_sum_squares(day.y));
    auto& row = per_day.emplace_back(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
      row[k] = hy_covariance(day.x, day.y, grid.lags[k]) / denom;
  }
  return assemble_curve(grid, std::move(per_day), skipped);
}

CrossCorrelationCurve cross_correlation_curve(const TickSeries& x, const TickSeries& y,
                                              const LagGrid& grid) {
  const DayPair day{x, y};
  return cross_correlation_curve(std::span<const DayPair>(&day, 1), grid);
}

double llr(const CrossCorrelationCurve& curve) {
  auto value = llr_from_values(curve.grid, curve.rho);
  if (!value) throw std::domain_error("llr: degenerate negative-lag correlation");
  return *value;
}

std::optional<double> llr_from_values(const LagGrid& grid,
                                      std::span<const std::optional<double>> values) {
  double pos = 0.0, neg = 0.0;
  bool has_pos = false, has_neg = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lag = grid.lags[k];
    if (lag == 0.0 || !values[k].has_value()) continue;
    const double r2 = *values[k] * *values[k];
    if (lag > 0.0) {
      pos += r2;
      has_pos = true;
    } else {
      neg += r2;
      has_neg = true;
    }
  }
  if (!has_pos || !has_neg || neg == 0.0) return std::nullopt;
  return pos / neg;
}

std::vector<double> daily_llrs(const CrossCorrelationCurve& curve) {
  std::vector<double> out;
  for (const auto& day : curve.per_day) {
    auto v = llr_from_values(curve.grid, day);
    if (v) out.push_back(*v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Thresholded estimator
// ---------------------------------------------------------------------------

namespace {

struct ThresholdSide {
  double sum_sq = 0.0;       // sigma_theta^2 before the square root
  std::size_t count = 0;     // N_theta
};

ThresholdSide threshold_side(const TickSeries& s, double theta) {
  ThresholdSide out;
  for (std::size_t i = 0; i < s.n_increments(); ++i) {
    const double r = s.increment(i);
    if (std::abs(r) >= theta) {
      out.sum_sq += r * r;
      ++out.count;
    }
  }
  return out;
}

// Numerator sum with the threshold on one leg, plus the both-legs-pass pair
// count N_theta^{X,Y}(l), in one sweep.
struct ThresholdSums {
  double num = 0.0;
  std::size_t pair_count = 0;
};

ThresholdSums threshold_sums(const TickSeries& x, const TickSeries& y, double lag,
                             double theta, bool threshold_on_x) {
  ThresholdSums out;
  const std::size_t nx = x.n_increments();
  const std::size_t ny = y.n_increments();
  std::size_t j_lo = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    while (j_lo < ny && !(x.t[i] - y.t[j_lo + 1] < -lag)) ++j_lo;
    const double rx = x.increment(i);
    const bool x_pass = std::abs(rx) >= theta;
    if (threshold_on_x && !x_pass) continue;
    for (std::size_t j = j_lo; j < ny && (y.t[j] - x.t[i + 1] < lag); ++j) {
      const double ry = y.increment(j);
      const bool y_pass = std::abs(ry) >= theta;
      if (threshold_on_x) {
        out.num += rx * ry;
        if (y_pass) ++out.pair_count;  // x_pass already holds
      } else {
        if (y_pass) {
          out.num += rx * ry;
          if (x_pass) ++out.pair_count;
        }
      }
    }
  }
  return out;
}

std::optional<double> rho_thresholded(const TickSeries& x, const TickSeries& y, double lag,
                                      double theta, bool threshold_on_x) {
  const auto tx = threshold_side(x, threshold_on_x ? theta : 0.0);
  const auto ty = threshold_side(y, threshold_on_x ? 0.0 : theta);
  const auto sums = threshold_sums(x, y, lag, theta, threshold_on_x);
  if (sums.pair_count == 0 || tx.count == 0 || ty.count == 0) return std::nullopt;
  const double scale = std::sqrt(static_cast<double>(tx.count) * static_cast<double>(ty.count));
  const double denom =
      static_cast<double>(sums.pair_count) * std::sqrt(tx.sum_sq) * std::sqrt(ty.sum_sq);
  if (denom <= 0.0) return std::nullopt;
  return scale * sums.num / denom;
}

}  // namespace

CrossCorrelationCurve thresholded_curve(std::span<const DayPair> days, const LagGrid& grid,
                                        double theta) {
  grid.validate();
  if (theta < 0.0) throw std::invalid_argument("thresholded_curve: theta < 0");

  std::vector<std::vector<std::optional<double>>> per_day;
  std::vector<double> zero_x, zero_y;  // both lag-0 variants, per day
  std::size_t skipped = 0;
  for (const auto& day : days) {
    if (!day_usable(day)) {
      ++skipped;
      continue;
    }
    auto& row = per_day.emplace_back(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double lag = grid.lags[k];
      if (lag > 0.0)
        row[k] = rho_thresholded(day.x, day.y, lag, theta, /*threshold_on_x=*/true);
      else if (lag < 0.0)
        row[k] = rho_thresholded(day.x, day.y, lag, theta, /*threshold_on_x=*/false);
      else
        row[k] = std::nullopt;  // reported as the pair below
    }
    if (auto v = rho_thresholded(day.x, day.y, 0.0, theta, true)) zero_x.push_back(*v);
    if (auto v = rho_thresholded(day.x, day.y, 0.0, theta, false)) zero_y.push_back(*v);
  }
  auto curve = assemble_curve(grid, std::move(per_day), skipped);
  if (!zero_x.empty()) curve.rho0_threshold_x = stats::mean(zero_x);
  if (!zero_y.empty()) curve.rho0_threshold_y = stats::mean(zero_y);
  return curve;
}

// ---------------------------------------------------------------------------
// Previous-tick estimator
// ---------------------------------------------------------------------------

namespace {

// Last-value interpolation of a series onto start + k*mesh, k = 0..n-1.
std::vector<double> sample_previous_tick(const TickSeries& s, double start, double mesh,
                                         std::size_t n) {
  std::vector<double> out(n);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = start + static_cast<double>(k) * mesh;
    while (idx + 1 < s.size() && s.t[idx + 1] <= p) ++idx;
    out[k] = s.m[idx];
  }
  return out;
}

// Pearson correlation of (a[k], b[k + shift]) over the valid index range.
std::optional<double> lagged_pearson(const std::vector<double>& a, const std::vector<double>& b,
                                     long shift) {
  const long n = static_cast<long>(a.size());
  const long lo = std::max<long>(0, -shift);
  const long hi = std::min<long>(n, n - shift);
  if (hi - lo < 2) return std::nullopt;
  const double len = static_cast<double>(hi - lo);
  double ma = 0.0, mb = 0.0;
  for (long k = lo; k < hi; ++k) {
    ma += a[static_cast<std::size_t>(k)];
    mb += b[static_cast<std::size_t>(k + shift)];
  }
  ma /= len;
  mb /= len;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (long k = lo; k < hi; ++k) {
    const double da = a[static_cast<std::size_t>(k)] - ma;
    const double db = b[static_cast<std::size_t>(k + shift)] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

CrossCorrelationCurve previous_tick_curve(std::span<const DayPair> days, const LagGrid& grid,
                                          double mesh_s) {
  grid.validate();
  if (!(mesh_s > 0.0)) throw std::invalid_argument("previous_tick_curve: mesh <= 0");

  std::vector<std::vector<std::optional<double>>> per_day;
  std::size_t skipped = 0;
  for (const auto& day : days) {
    if (!day_usable(day)) {
      ++skipped;
      continue;
    }
    const double start = std::max(day.x.t.front(), day.y.t.front());
    const double end = std::min(day.x.t.back(), day.y.t.back());
    if (end - start < mesh_s)
      throw std::invalid_argument("previous_tick_curve: mesh larger than the common span");
    const auto n_points = static_cast<std::size_t>(std::floor((end - start) / mesh_s)) + 1;
    const auto px = sample_previous_tick(day.x, start, mesh_s, n_points);
    const auto py = sample_previous_tick(day.y, start, mesh_s, n_points);
    std::vector<double> rx(n_points - 1), ry(n_points - 1);
    for (std::size_t k = 0; k + 1 < n_points; ++k) {
      rx[k] = px[k + 1] - px[k];
      ry[k] = py[k + 1] - py[k];
    }
    auto& row = per_day.emplace_back(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      // Positive lag pairs X returns with later Y returns.
      const long shift = std::lround(grid.lags[k] / mesh_s);
      row[k] = lagged_pearson(rx, ry, shift);
    }
  }
  return assemble_curve(grid, std::move(per_day), skipped);
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

namespace {

struct SplineMax {
  double lag = 0.0;
  double value = 0.0;
};

// Ties within this margin resolve toward the smaller |lag| (deterministic
// and immune to last-ulp spline noise on flat stretches).
constexpr double kArgmaxTie = 1e-9;

// Argmax on the regular spline mesh; ties go to the smaller |lag|.
std::optional<SplineMax> spline_argmax(const LagGrid& grid,
                                       std::span<const std::optional<double>> values,
                                       const SummaryOptions& opts) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (values[k].has_value()) {
      xs.push_back(grid.lags[k]);
      ys.push_back(*values[k]);
    }
  }
  if (xs.size() < 4) return std::nullopt;
  const stats::CubicSpline spline(xs, ys);

  const double mesh = opts.spline_mesh_s;
  const auto k_lo = static_cast<long>(std::ceil(xs.front() / mesh - 1e-9));
  const auto k_hi = static_cast<long>(std::floor(xs.back() / mesh + 1e-9));
  SplineMax best;
  bool first = true;
  for (long k = k_lo; k <= k_hi; ++k) {
    const double lag = static_cast<double>(k) * mesh;
    const double v = spline(lag);
    const double score = opts.argmax_abs ? std::abs(v) : v;
    const double best_score = opts.argmax_abs ? std::abs(best.value) : best.value;
    if (first || score > best_score + kArgmaxTie ||
        (score > best_score - kArgmaxTie && std::abs(lag) < std::abs(best.lag))) {
      best = {lag, v};
      first = false;
    }
  }
  return best;
}

}  // namespace

LeadLagSummary extract_summary(const CrossCorrelationCurve& curve, const SummaryOptions& opts) {
  if (curve.grid.lags.front() > -1.0 || curve.grid.lags.back() < 1.0)
    throw std::invalid_argument("extract_summary: curve must cover [-1 s, +1 s]");
  auto max = spline_argmax(curve.grid, curve.rho, opts);
  if (!max) throw std::invalid_argument("extract_summary: spline requires >= 4 raw points");

  LeadLagSummary out;
  out.llr = llr(curve);
  out.max_corr = max->value;
  out.max_lag_s = max->lag;

  std::vector<double> day_lags;
  for (const auto& day : curve.per_day)
    if (auto m = spline_argmax(curve.grid, day, opts)) day_lags.push_back(m->lag);
  if (day_lags.size() >= 2) out.max_lag_sd = stats::daily_band(day_lags).sd;
  return out;
}

TickSeries slice_series(const TickSeries& series, double begin_s, double end_s) {
  TickSeries out;
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series.t[i] >= begin_s && series.t[i] <= end_s) out.push_back(series.t[i], series.m[i]);
  return out;
}

std::vector<IntradaySlice> intraday_profile(std::span<const DayPair> days,
                                            double session_begin_s, double session_end_s,
                                            double slice_minutes, double max_lag_s,
                                            const SummaryOptions& opts) {
  if (!(slice_minutes > 0.0)) throw std::invalid_argument("intraday_profile: bad slice width");
  const double slice_len = slice_minutes * 60.0;
  const auto n_slices =
      static_cast<std::size_t>(std::floor((session_end_s - session_begin_s) / slice_len));
  const LagGrid grid = LagGrid::truncated(max_lag_s);

  std::vector<IntradaySlice> out;
  out.reserve(n_slices);
  for (std::size_t s = 0; s < n_slices; ++s) {
    IntradaySlice slice;
    slice.begin_s = session_begin_s + static_cast<double>(s) * slice_len;
    slice.end_s = slice.begin_s + slice_len;
    std::vector<DayPair> sliced;
    sliced.reserve(days.size());
    for (const auto& day : days)
      sliced.push_back({slice_series(day.x, slice.begin_s, slice.end_s),
                        slice_series(day.y, slice.begin_s, slice.end_s)});
    slice.curve = cross_correlation_curve(sliced, grid);
    if (slice.curve.n_days > 0) {
      try {
        slice.summary = extract_summary(slice.curve, opts);
      } catch (const std::exception&) {
        // not enough points in this slice; leave the summary null
      }
    }
    out.push_back(std::move(slice));
  }
  return out;
}

}  // namespace leadlag
