// simkit.hpp: Poisson-sampled correlated Brownian generators, surrogate
// series, constructed lead/lag pairs, and the closed-form expected-covariance
// oracle with its Monte Carlo cross-check.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "leadlag/stats.hpp"
#include "leadlag/types.hpp"

namespace leadlag {

struct SimConfig {
  double lambda1 = 0.2;  // leader Poisson intensity, events/s
  double lambda2 = 0.2;  // lagger Poisson intensity
  double rho = 0.8;      // contemporaneous Brownian correlation
  double T_s = 30600.0;  // horizon
  double mesh_s = 5.0;   // Brownian discretization step
  std::uint64_t seed = 0;
  int n_reps = 64;

  void validate() const;
};

// Two correlated standard Brownian paths on the regular mesh over [0, T]
// (exact Gaussian step pairing; a shorter final step lands exactly on T).
// value*(t) reads the path at the last mesh point <= t.
struct BrownianPair {
  double mesh = 0.0;
  double T = 0.0;
  std::vector<double> b1, b2;

  double value1(double t) const { return b1[index(t)]; }
  double value2(double t) const { return b2[index(t)]; }

 private:
  std::size_t index(double t) const;
};

BrownianPair make_brownian_pair(double rho, double T, double mesh, stats::Rng& rng);

// Jump times of an intensity-lambda Poisson process on [0, T] with forced
// endpoints 0 and T.
std::vector<double> poisson_grid(double lambda, double T, stats::Rng& rng);

// Synchronously correlated Brownians, each last-value-sampled along its own
// independent Poisson grid. `rep` selects an independent substream of
// cfg.seed.
DayPair generate_poisson_pair(const SimConfig& cfg, std::uint64_t rep = 0);

// Same-timestamp surrogates: correlated Brownians on a `mesh_s` grid sampled
// at the real series' exact epochs (the no-genuine-lead-lag null).
DayPair generate_surrogate(const TickSeries& real_x, const TickSeries& real_y, double rho,
                           double mesh_s, std::uint64_t seed);

// Known-ground-truth pair: the leader samples B1, the lagger samples
// rho * B1(t - lag_d) + sqrt(1-rho^2) * B2(t) (+ optional iid Gaussian
// observation noise), so the leader leads by exactly lag_d.
DayPair generate_lagged_pair(const SimConfig& cfg, double lag_d, double noise_sd = 0.0,
                             std::uint64_t rep = 0);

struct OracleValue {
  double lag = 0.0;
  double expected_cov = 0.0;
  int truncation_n = 0;    // closed-form evaluation: no series truncation
  double tail_bound = 0.0;
};

// Closed-form E(C_hat(l)) for the Poisson-sampled Brownian pair; symmetric
// in the lag, exact rho at l = 0 and 0 at |l| = T. Guard: (l1+l2)T <= 500
// keeps every combined exponent representable.
OracleValue oracle_expected_cov(double lambda1, double lambda2, double rho, double T,
                                double lag, double tol = 1e-12);

// g_h(n, i): (1/n) times the Binomial(n, h) CDF at i; evaluated by the
// stable term recurrence.
double g_h(int n, int i, double h);

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  int n_reps = 0;
};

// Monte Carlo evaluation of the timestamp-only overlap identity
// rho E( sum 1{l < s_j - t_{i-1}} |overlap_ij| ) / T, the independent oracle
// for oracle_expected_cov.
McEstimate expectation_brute_force(double lambda1, double lambda2, double rho, double T,
                                   double lag, int n_reps, std::uint64_t seed);

}  // namespace leadlag
