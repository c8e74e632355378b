// helpers.hpp: shared fixtures and independent oracles for the test suites.
// The oracles here deliberately re-derive results by direct enumeration and
// must stay decoupled from the library's optimized paths.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "leadlag/types.hpp"

namespace testkit {

// O(n*m) Hayashi-Yoshida covariance: the full double loop over increment
// pairs with the same overlap predicates as the definition.
inline double brute_force_hy_cov(const leadlag::TickSeries& x, const leadlag::TickSeries& y,
                                 double lag) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.n_increments(); ++i)
    for (std::size_t j = 0; j < y.n_increments(); ++j)
      if ((x.t[i] - y.t[j + 1] < -lag) && (y.t[j] - x.t[i + 1] < lag))
        acc += x.increment(i) * y.increment(j);
  return acc;
}

// Random tick series with epoch times on the 1/1024 grid (exactly
// representable, so time translations by integers stay exact).
inline leadlag::TickSeries random_series(std::mt19937_64& rng, std::size_t max_increments,
                                         double span = 64.0) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_increments);
  std::uniform_int_distribution<long> grid(0, static_cast<long>(span * 1024.0));
  std::normal_distribution<double> step(0.0, 1.0);
  const std::size_t n_epochs = n_dist(rng) + 1;
  std::vector<long> ticks;
  while (ticks.size() < n_epochs) {
    long v = grid(rng);
    bool dup = false;
    for (long u : ticks) dup |= (u == v);
    if (!dup) ticks.push_back(v);
  }
  std::sort(ticks.begin(), ticks.end());
  leadlag::TickSeries out;
  double m = 100.0;
  for (long v : ticks) {
    out.push_back(static_cast<double>(v) / 1024.0, m);
    m += step(rng);
  }
  return out;
}

// The worked hand instance: X increments (+1, -1) on ]0,2], ]2,4];
// Y increments (+1, +2) on ]0,3], ]3,4].
inline leadlag::DayPair hand_instance() {
  leadlag::DayPair day;
  day.x.push_back(0.0, 10.0);
  day.x.push_back(2.0, 11.0);
  day.x.push_back(4.0, 10.0);
  day.y.push_back(0.0, 20.0);
  day.y.push_back(3.0, 21.0);
  day.y.push_back(4.0, 23.0);
  return day;
}

}  // namespace testkit
