// test_simkit.cpp
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "leadlag/hycorr.hpp"
#include "leadlag/simkit.hpp"

using namespace leadlag;

TEST_CASE("g_h identities") {
  SUBCASE("g_h(n, n) = 1/n for any h") {
    for (int n : {1, 2, 5, 17, 50})
      for (double h : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(std::abs(g_h(n, n, h) - 1.0 / n) < 1e-12);
  }
  SUBCASE("h = 0 collapses to 1/n for every i") {
    for (int n : {1, 3, 10, 50})
      for (int i : {0, 1, n / 2, n})
        CHECK(g_h(n, i, 0.0) == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
  SUBCASE("n = 1, i = 0 gives 1 - h") {
    for (double h : {0.0, 0.2, 0.5, 0.9})
      CHECK(g_h(1, 0, h) == doctest::Approx(1.0 - h).epsilon(1e-14));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(g_h(0, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(g_h(3, 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(g_h(3, -1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(g_h(3, 1, 1.0), std::invalid_argument);
  }
}

TEST_CASE("oracle forced values: rho at lag 0, zero at lag T") {
  auto rng = stats::Rng::substream(2718, 0);
  for (int k = 0; k < 20; ++k) {
    const double l1 = 0.05 + 0.95 * rng.uniform();
    const double l2 = 0.05 + 0.95 * rng.uniform();
    const double T = 10.0 + 40.0 * rng.uniform();
    const double rho = -1.0 + 2.0 * rng.uniform();
    CHECK(std::abs(oracle_expected_cov(l1, l2, rho, T, 0.0).expected_cov - rho) < 1e-9);
    CHECK(std::abs(oracle_expected_cov(l1, l2, rho, T, T).expected_cov) < 1e-9);
  }
}

TEST_CASE("oracle symmetry: negative lags map to positive") {
  const auto plus = oracle_expected_cov(0.3, 0.5, 0.8, 20.0, 2.5);
  const auto minus = oracle_expected_cov(0.3, 0.5, 0.8, 20.0, -2.5);
  CHECK(plus.expected_cov == minus.expected_cov);
}

TEST_CASE("oracle is linear in rho") {
  for (double lag : {0.0, 1.0, 5.0}) {
    const double half = oracle_expected_cov(0.4, 0.7, 0.4, 25.0, lag).expected_cov;
    const double full = oracle_expected_cov(0.4, 0.7, 0.8, 25.0, lag).expected_cov;
    CHECK(full == doctest::Approx(2.0 * half).epsilon(1e-12));
  }
}

TEST_CASE("oracle guards") {
  CHECK_THROWS_AS(oracle_expected_cov(0.5, 0.5, 0.8, 2000.0, 0.0), NumericGuardError);
  CHECK_THROWS_AS(oracle_expected_cov(0.5, 0.5, 0.8, 20.0, 30.0), std::invalid_argument);
  CHECK_THROWS_AS(oracle_expected_cov(-0.1, 0.5, 0.8, 20.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(oracle_expected_cov(0.5, 0.5, 0.8, 20.0, 0.0, -1.0), std::invalid_argument);
  // Closed form: no truncation, tail bound within any positive tolerance.
  const auto v = oracle_expected_cov(0.5, 0.5, 0.8, 20.0, 1.0, 1e-15);
  CHECK(v.truncation_n == 0);
  CHECK(v.tail_bound <= 1e-15);
}

TEST_CASE("equal-lambda branch agrees with the nearby unequal branch") {
  for (double lam : {0.2, 0.4, 0.8}) {
    for (double lag : {0.0, 1.0, 5.0}) {
      const double equal = oracle_expected_cov(lam, lam, 0.8, 20.0, lag).expected_cov;
      const double unequal =
          oracle_expected_cov(lam, lam * (1.0 + 1e-6), 0.8, 20.0, lag).expected_cov;
      CHECK(std::abs(equal - unequal) <= 1e-4 * std::abs(equal));
    }
  }
}

TEST_CASE("brute-force expectation: exact identities") {
  SUBCASE("lag 0 is exactly rho (overlaps tile [0, T])") {
    const auto mc = expectation_brute_force(0.3, 0.5, 0.8, 20.0, 0.0, 200, 5);
    CHECK(mc.mean == doctest::Approx(0.8).epsilon(1e-9));
  }
  SUBCASE("lag >= T is exactly zero every rep") {
    const auto mc = expectation_brute_force(0.3, 0.5, 0.8, 20.0, 20.0, 200, 5);
    CHECK(mc.mean == 0.0);
    CHECK(mc.stderr == 0.0);
  }
}

TEST_CASE("brute-force expectation agrees with the closed form within 3 stderr") {
  for (double lag : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto mc = expectation_brute_force(0.3, 0.5, 0.8, 20.0, lag, 4000, 77);
    const double oracle = oracle_expected_cov(0.3, 0.5, 0.8, 20.0, lag).expected_cov;
    CHECK(std::abs(mc.mean - oracle) <= 3.0 * mc.stderr);
  }
}

TEST_CASE("brute force vs closed form across a randomized parameter grid") {
  auto rng = stats::Rng::substream(424242, 0);
  int agree = 0;
  const int n_points = 40;
  for (int k = 0; k < n_points; ++k) {
    const double l1 = 0.05 + 0.95 * rng.uniform();
    const double l2 = 0.05 + 0.95 * rng.uniform();
    const double T = 10.0 + 40.0 * rng.uniform();
    const double lag = 0.5 * T * rng.uniform();
    const auto mc = expectation_brute_force(l1, l2, 0.8, T, lag, 20000,
                                            1000 + static_cast<std::uint64_t>(k));
    const double oracle = oracle_expected_cov(l1, l2, 0.8, T, lag).expected_cov;
    // Deep in the tail the per-rep value is 0 for nearly every grid draw, so
    // the stderr degenerates; 1e-9 is far below the statistic's scale and
    // covers that case without weakening the mid-range comparison.
    if (std::abs(mc.mean - oracle) <= std::max(3.0 * mc.stderr, 1e-9)) ++agree;
  }
  CHECK(agree >= static_cast<int>(0.95 * n_points));
}

TEST_CASE("poisson grids carry forced endpoints") {
  auto rng = stats::Rng::substream(9, 0);
  const auto grid = poisson_grid(0.5, 30.0, rng);
  REQUIRE(grid.size() >= 2);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 30.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("generate_poisson_pair") {
  SimConfig cfg;
  cfg.lambda1 = 0.3;
  cfg.lambda2 = 0.6;
  cfg.rho = 0.8;
  cfg.T_s = 200.0;
  cfg.mesh_s = 0.5;
  cfg.seed = 123;

  SUBCASE("deterministic under the seed") {
    const auto a = generate_poisson_pair(cfg, 4);
    const auto b = generate_poisson_pair(cfg, 4);
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) {
      CHECK(a.x.t[i] == b.x.t[i]);
      CHECK(a.x.m[i] == b.x.m[i]);
    }
    const auto c = generate_poisson_pair(cfg, 5);
    CHECK(a.x.size() != c.x.size());  // different substream
  }

  SUBCASE("endpoints forced; increment sums telescope to the path endpoints") {
    const auto day = generate_poisson_pair(cfg, 0);
    CHECK(day.x.t.front() == 0.0);
    CHECK(day.x.t.back() == cfg.T_s);
    CHECK(day.y.t.front() == 0.0);
    CHECK(day.y.t.back() == cfg.T_s);
    double sum = 0.0;
    for (std::size_t i = 0; i < day.x.n_increments(); ++i) sum += day.x.increment(i);
    CHECK(sum == doctest::Approx(day.x.m.back() - day.x.m.front()).epsilon(1e-9));
  }

  SUBCASE("rho = 1 with equal intensities and a shared grid gives equal increments") {
    SimConfig unit = cfg;
    unit.rho = 1.0;
    const auto day = generate_poisson_pair(unit, 1);
    // With rho = 1 both paths coincide; sampling differs only through the
    // Poisson grids. Sample both legs on the x grid to compare.
    auto rng = stats::Rng::substream(unit.seed, 1);
    const auto path = make_brownian_pair(1.0, unit.T_s, unit.mesh_s, rng);
    for (double t : {0.0, 10.0, 55.5, 199.0})
      CHECK(path.value1(t) == path.value2(t));
  }

  SUBCASE("rho = 0: correlation near zero over replications") {
    SimConfig null = cfg;
    null.rho = 0.0;
    null.T_s = 400.0;
    double sum = 0.0;
    const int reps = 64;
    std::vector<double> vals;
    for (int r = 0; r < reps; ++r) {
      const auto day = generate_poisson_pair(null, static_cast<std::uint64_t>(r));
      vals.push_back(hy_correlation(day.x, day.y, 0.0));
      sum += vals.back();
    }
    const double mean = sum / reps;
    const double se = stats::stderr_mean(vals);
    CHECK(std::abs(mean) <= 3.0 * se);
  }
}

TEST_CASE("monte carlo match: mean of hy_covariance / T against the oracle") {
  // 10^4 replications on a small horizon; fine mesh keeps the discretization
  // bias far below the Monte Carlo band.
  SimConfig cfg;
  cfg.lambda1 = 0.3;
  cfg.lambda2 = 0.5;
  cfg.rho = 0.8;
  cfg.T_s = 20.0;
  cfg.mesh_s = 0.002;
  cfg.seed = 31337;
  const int reps = 10000;
  const std::vector<double> lags{0.0, 1.0, 2.0, 5.0, 10.0};

  std::vector<std::vector<double>> per_lag(lags.size());
  for (int r = 0; r < reps; ++r) {
    const auto day = generate_poisson_pair(cfg, static_cast<std::uint64_t>(r));
    for (std::size_t k = 0; k < lags.size(); ++k)
      per_lag[k].push_back(hy_covariance(day.x, day.y, lags[k]) / cfg.T_s);
  }
  for (std::size_t k = 0; k < lags.size(); ++k) {
    const double mean = stats::mean(per_lag[k]);
    const double se = stats::stderr_mean(per_lag[k]);
    const double oracle =
        oracle_expected_cov(cfg.lambda1, cfg.lambda2, cfg.rho, cfg.T_s, lags[k]).expected_cov;
    INFO("lag ", lags[k], " mean ", mean, " oracle ", oracle, " se ", se);
    CHECK(std::abs(mean - oracle) <= 3.0 * se);
  }
}

TEST_CASE("generate_surrogate") {
  std::mt19937_64 seed_rng(77);
  const auto real_x = testkit::random_series(seed_rng, 60, 512.0);
  const auto real_y = testkit::random_series(seed_rng, 80, 512.0);

  SUBCASE("timestamps are preserved exactly") {
    const auto sur = generate_surrogate(real_x, real_y, 0.5, 1.0, 11);
    REQUIRE(sur.x.size() == real_x.size());
    REQUIRE(sur.y.size() == real_y.size());
    for (std::size_t i = 0; i < sur.x.size(); ++i) CHECK(sur.x.t[i] == real_x.t[i]);
    for (std::size_t i = 0; i < sur.y.size(); ++i) CHECK(sur.y.t[i] == real_y.t[i]);
  }
  SUBCASE("rho = 1 on identical timestamps gives correlation 1") {
    const auto sur = generate_surrogate(real_x, real_x, 1.0, 1.0, 12);
    CHECK(hy_correlation(sur.x, sur.y, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("empty input throws") {
    TickSeries empty;
    CHECK_THROWS_AS(generate_surrogate(empty, real_y, 0.5, 1.0, 1), std::invalid_argument);
  }
}

TEST_CASE("surrogates of genuinely lead/lagged data erase the asymmetry") {
  // "Real" data: 30 days with a built-in 0.6 s lead. Surrogates share each
  // day's timestamps and lag-0 correlation but are built from synchronous
  // Brownians, so their LLR band must cover 1 and their max-lag band 0,
  // while the real days' LLR band sits above 1.
  SimConfig cfg;
  cfg.lambda1 = 1.0;
  cfg.lambda2 = 0.8;
  cfg.rho = 0.8;
  cfg.T_s = 2000.0;
  cfg.mesh_s = 0.05;
  cfg.seed = 808;
  const LagGrid grid = LagGrid::truncated(5.0);

  std::vector<DayPair> real_days(30), surrogate_days(30);
  for (std::size_t d = 0; d < real_days.size(); ++d) {
    real_days[d] = generate_lagged_pair(cfg, 0.6, 0.0, static_cast<std::uint64_t>(d));
    const double rho0 =
        std::clamp(hy_correlation(real_days[d].x, real_days[d].y, 0.0), -1.0, 1.0);
    surrogate_days[d] = generate_surrogate(real_days[d].x, real_days[d].y, rho0, 1.0,
                                           9000 + static_cast<std::uint64_t>(d));
    CHECK(surrogate_days[d].x.t == real_days[d].x.t);
    CHECK(surrogate_days[d].y.t == real_days[d].y.t);
  }

  const auto real_curve = cross_correlation_curve(real_days, grid);
  const auto sur_curve = cross_correlation_curve(surrogate_days, grid);

  const auto real_band = stats::daily_band(daily_llrs(real_curve));
  const auto sur_band = stats::daily_band(daily_llrs(sur_curve));
  CHECK(real_band.mean - real_band.half_width95 > 1.0);
  CHECK(sur_band.contains(1.0));

  std::vector<double> sur_max_lags;
  for (const auto& row : sur_curve.per_day) {
    CrossCorrelationCurve one;
    one.grid = sur_curve.grid;
    one.rho = row;
    one.ci95.assign(grid.size(), 0.0);
    one.n_days_per_lag.assign(grid.size(), 1);
    sur_max_lags.push_back(extract_summary(one).max_lag_s);
  }
  CHECK(stats::daily_band(sur_max_lags).contains(0.0));
}

TEST_CASE("generate_lagged_pair ground truth") {
  SimConfig cfg;
  cfg.lambda1 = 1.0;
  cfg.lambda2 = 1.0;
  cfg.rho = 0.8;
  cfg.T_s = 2000.0;
  cfg.mesh_s = 0.05;
  cfg.seed = 4242;

  SUBCASE("deterministic") {
    const auto a = generate_lagged_pair(cfg, 0.6, 0.0, 2);
    const auto b = generate_lagged_pair(cfg, 0.6, 0.0, 2);
    REQUIRE(a.y.size() == b.y.size());
    for (std::size_t i = 0; i < a.y.size(); ++i) CHECK(a.y.m[i] == b.y.m[i]);
  }

  SUBCASE("the cross-correlation curve peaks near the built-in lag") {
    std::vector<DayPair> days;
    for (int r = 0; r < 8; ++r)
      days.push_back(generate_lagged_pair(cfg, 0.6, 0.0, static_cast<std::uint64_t>(r)));
    const auto curve = cross_correlation_curve(days, LagGrid::truncated(5.0));
    const auto summary = extract_summary(curve);
    CHECK(std::abs(summary.max_lag_s - 0.6) <= 0.3);
    CHECK(summary.llr > 1.0);
  }
}
