// stats.hpp: small statistics toolbox (moments, CIs, quantiles, KS test,
// natural cubic spline, deterministic RNG streams).
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace leadlag::stats {

double mean(std::span<const double> v);

// Sample standard deviation (n-1 denominator); 0 for n < 2.
double sample_sd(std::span<const double> v);

// Standard error of the mean, sample_sd / sqrt(n).
double stderr_mean(std::span<const double> v);

// Across-day mean with the population-variance 95% band used throughout:
// sd^2 = (1/D) sum x^2 - mean^2, half_width = 1.96 sd / sqrt(D).
struct MeanBand {
  double mean = 0.0;
  double sd = 0.0;
  double half_width95 = 0.0;
  std::size_t n = 0;

  bool contains(double value) const {
    return value >= mean - half_width95 && value <= mean + half_width95;
  }
};
MeanBand daily_band(std::span<const double> per_day_values);

// Empirical quantile with linear interpolation between order statistics.
// `sorted` must be ascending, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

double normal_cdf(double x);

struct KsResult {
  double d = 0.0;        // sup |F1 - F2|
  double p_value = 1.0;  // asymptotic two-sample p-value
};
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Asymptotic Kolmogorov distribution tail Q(lambda) with the small-sample
// correction lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * d, ne = n1 n2/(n1+n2).
double ks_asymptotic_pvalue(double d, std::size_t n1, std::size_t n2);

struct ProportionTest {
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};
// Two-proportion z test on hit counts k1/n1 vs k2/n2 (pooled variance).
ProportionTest two_proportion_test(std::size_t k1, std::size_t n1, std::size_t k2,
                                   std::size_t n2);

// Natural cubic spline through (x, y); x strictly increasing, size >= 2
// (size 2 degenerates to the straight line). Evaluation clamps to the knot
// range.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

// Deterministic random stream. All draws are fully specified functions of the
// mt19937_64 output so that a seed pins every generated dataset bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream for replication `stream`; mixes (seed, stream)
  // with splitmix64 so neighbouring ids do not correlate.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  double uniform();               // [0, 1), 53-bit
  double exponential(double rate);
  double normal();                // Box-Muller, cached spare

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace leadlag::stats
