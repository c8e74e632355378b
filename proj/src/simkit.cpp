// simkit.cpp
#include "leadlag/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace leadlag {

void SimConfig::validate() const {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("SimConfig: intensities must be > 0");
  if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("SimConfig: |rho| must be <= 1");
  if (!(mesh_s > 0.0) || !(mesh_s <= T_s))
    throw std::invalid_argument("SimConfig: need 0 < mesh <= T");
  if (n_reps < 1) throw std::invalid_argument("SimConfig: n_reps must be >= 1");
}

std::size_t BrownianPair::index(double t) const {
  if (t <= 0.0) return 0;
  if (t >= T) return b1.size() - 1;
  auto k = static_cast<std::size_t>(t / mesh);
  return std::min(k, b1.size() - 1);
}

BrownianPair make_brownian_pair(double rho, double T, double mesh, stats::Rng& rng) {
  BrownianPair path;
  path.mesh = mesh;
  path.T = T;
  const auto n_regular = static_cast<std::size_t>(std::floor(T / mesh));
  const double tail = T - static_cast<double>(n_regular) * mesh;
  const double mix = std::sqrt(1.0 - rho * rho);

  path.b1.reserve(n_regular + 2);
  path.b2.reserve(n_regular + 2);
  path.b1.push_back(0.0);
  path.b2.push_back(0.0);
  const double sd = std::sqrt(mesh);
  for (std::size_t k = 0; k < n_regular; ++k) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    path.b1.push_back(path.b1.back() + sd * z1);
    path.b2.push_back(path.b2.back() + sd * (rho * z1 + mix * z2));
  }
  if (tail > 0.0) {
    const double sd_tail = std::sqrt(tail);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    path.b1.push_back(path.b1.back() + sd_tail * z1);
    path.b2.push_back(path.b2.back() + sd_tail * (rho * z1 + mix * z2));
  }
  return path;
}

std::vector<double> poisson_grid(double lambda, double T, stats::Rng& rng) {
  std::vector<double> grid;
  grid.push_back(0.0);
  double t = rng.exponential(lambda);
  while (t < T) {
    grid.push_back(t);
    t += rng.exponential(lambda);
  }
  grid.push_back(T);
  return grid;
}

namespace {

TickSeries sample_path(const std::vector<double>& grid, auto&& value_at) {
  TickSeries out;
  out.t.reserve(grid.size());
  out.m.reserve(grid.size());
  for (double t : grid) out.push_back(t, value_at(t));
  return out;
}

}  // namespace

DayPair generate_poisson_pair(const SimConfig& cfg, std::uint64_t rep) {
  cfg.validate();
  auto rng = stats::Rng::substream(cfg.seed, rep);
  const auto path = make_brownian_pair(cfg.rho, cfg.T_s, cfg.mesh_s, rng);
  const auto grid1 = poisson_grid(cfg.lambda1, cfg.T_s, rng);
  const auto grid2 = poisson_grid(cfg.lambda2, cfg.T_s, rng);
  DayPair day;
  day.x = sample_path(grid1, [&](double t) { return path.value1(t); });
  day.y = sample_path(grid2, [&](double t) { return path.value2(t); });
  return day;
}

DayPair generate_surrogate(const TickSeries& real_x, const TickSeries& real_y, double rho,
                           double mesh_s, std::uint64_t seed) {
  if (real_x.empty() || real_y.empty())
    throw std::invalid_argument("generate_surrogate: empty real series");
  const double t0 = std::min(real_x.t.front(), real_y.t.front());
  const double t1 = std::max(real_x.t.back(), real_y.t.back());
  if (!(t1 > t0)) throw std::invalid_argument("generate_surrogate: degenerate time span");
  auto rng = stats::Rng::substream(seed, 0);
  const auto path = make_brownian_pair(rho, t1 - t0, mesh_s, rng);
  DayPair day;
  day.x = sample_path(real_x.t, [&](double t) { return path.value1(t - t0); });
  day.y = sample_path(real_y.t, [&](double t) { return path.value2(t - t0); });
  return day;
}

DayPair generate_lagged_pair(const SimConfig& cfg, double lag_d, double noise_sd,
                             std::uint64_t rep) {
  cfg.validate();
  if (lag_d < 0.0 || lag_d >= cfg.T_s)
    throw std::invalid_argument("generate_lagged_pair: need 0 <= lag_d < T");
  auto rng = stats::Rng::substream(cfg.seed, rep);
  const auto path = make_brownian_pair(0.0, cfg.T_s, cfg.mesh_s, rng);
  const auto grid1 = poisson_grid(cfg.lambda1, cfg.T_s, rng);
  const auto grid2 = poisson_grid(cfg.lambda2, cfg.T_s, rng);
  const double mix = std::sqrt(1.0 - cfg.rho * cfg.rho);
  DayPair day;
  day.x = sample_path(grid1, [&](double t) { return path.value1(t); });
  day.y = sample_path(grid2, [&](double t) {
    const double base = cfg.rho * path.value1(t - lag_d) + mix * path.value2(t);
    return noise_sd > 0.0 ? base + noise_sd * rng.normal() : base;
  });
  return day;
}

// ---------------------------------------------------------------------------
// Closed-form oracle
// ---------------------------------------------------------------------------

namespace {

// e^x - 1 - x, series for small |x| to keep full relative accuracy.
double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-3)
    return 0.5 * x * x * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0 * (1.0 + x / 6.0))));
  return std::expm1(x) - x;
}

// e^x - 1 - x - x^2/2
double expm1_minus_x_half_sq(double x) {
  if (std::abs(x) < 1e-2) {
    return x * x * x / 6.0 *
           (1.0 + x / 4.0 * (1.0 + x / 5.0 * (1.0 + x / 6.0 * (1.0 + x / 7.0 * (1.0 + x / 8.0)))));
  }
  return std::expm1(x) - x - 0.5 * x * x;
}

// 1 + e^x (x - 1) = sum_{k>=2} (k-1) x^k / k!
double one_plus_exp_xm1(double x) {
  if (std::abs(x) < 1e-2) {
    double sum = 0.0;
    double term = 0.5 * x * x;
    for (int k = 2; k <= 12; ++k) {
      sum += term * static_cast<double>(k - 1);
      term *= x / static_cast<double>(k + 1);
    }
    return sum;
  }
  return 1.0 + std::exp(x) * (x - 1.0);
}

// e^x (x - 2) + x + 2 = sum_{k>=3} (k-2) x^k / k!
double exp_xm2_plus(double x) {
  if (std::abs(x) < 1e-2) {
    double sum = 0.0;
    double term = x * x * x / 6.0;
    for (int k = 3; k <= 14; ++k) {
      sum += term * static_cast<double>(k - 2);
      term *= x / static_cast<double>(k + 1);
    }
    return sum;
  }
  return std::exp(x) * (x - 2.0) + x + 2.0;
}

double oracle_unequal(double l1, double l2, double rho, double T, double lag) {
  const double L = l1 + l2;
  const double u = T - lag;
  const double e1l = std::expm1(l1 * lag);
  const double e2l = std::expm1(l2 * lag);
  const double s1 =
      l1 / (l2 * (l1 - l2) * T) * (std::exp(l1 * lag) * expm1_minus_x(l1 * u) -
                                   0.5 * (l1 * u) * (l1 * u)) -
      l2 / (l1 * (l1 - l2) * T) * (std::exp(l2 * lag) * expm1_minus_x(l2 * u) -
                                   0.5 * (l2 * u) * (l2 * u)) +
      (l1 * e1l - l2 * e2l) / ((l1 * l1 - l2 * l2) * T) * one_plus_exp_xm1(L * u) +
      ((l2 * l2 / l1) * e2l - (l1 * l1 / l2) * e1l) / ((l1 * l1 - l2 * l2) * T) *
          expm1_minus_x(L * u) -
      (l1 * l1 + l2 * l2) / (l1 * l2 * L * T) * expm1_minus_x_half_sq(L * u) +
      exp_xm2_plus(L * u) / (L * T);
  const double s2 =
      std::expm1(L * u) / ((l1 - l2) * T) * (e1l - (l2 / l1) * e2l) -
      (std::expm1(l1 * u) * e1l + expm1_minus_x(l1 * u) -
       (l2 / l1) * (std::expm1(l2 * u) * e2l + expm1_minus_x(l2 * u))) /
          ((l1 - l2) * T) +
      expm1_minus_x(L * u) / (l1 * T);
  const double s3 = (l1 / l2) * s2;
  // The printed S4 omits the 1{lag < T} carried by its originating term; it
  // is restored by the lag < T branch in oracle_expected_cov.
  const double s4 = (std::exp(l1 * T) - std::exp(l2 * T)) / ((l1 - l2) * T);
  return rho * std::exp(-L * T) * (s1 + s2 + s3 + s4);
}

double oracle_equal(double lam, double rho, double T, double lag) {
  const double u = T - lag;
  const double x = lam * u;
  const double ell = std::exp(lam * lag);
  const double s1 = std::exp(lam * T) * (2.0 / (lam * T) + 1.0) -
                    ell * (2.0 / (lam * T) + lag / T + (1.0 - lag / T) * (3.0 + lam * lag)) -
                    2.0 * lam * u * u / T +
                    one_plus_exp_xm1(2.0 * x) * (ell * (1.0 + lam * lag) - 1.0) / (2.0 * lam * T) +
                    expm1_minus_x(2.0 * x) * (3.0 - ell * (3.0 + lam * lag)) / (2.0 * lam * T) -
                    expm1_minus_x_half_sq(2.0 * x) / (lam * T) +
                    (std::exp(2.0 * x) * (x - 1.0) + x + 1.0) / (lam * T);
  const double s2 = std::expm1(2.0 * x) / T * (ell * (lag + 1.0 / lam) - 1.0 / lam) +
                    expm1_minus_x(2.0 * x) / (lam * T) -
                    std::exp(lam * T) * (1.0 + 1.0 / (lam * T)) + ell / T * (1.0 / lam + lag) +
                    2.0 * (1.0 - lag / T);
  const double s4 = std::exp(lam * T);
  return rho * std::exp(-2.0 * lam * T) * (s1 + 2.0 * s2 + s4);
}

constexpr double kEqualLambdaSwitch = 1e-8;
constexpr double kOverflowGuard = 500.0;

}  // namespace

OracleValue oracle_expected_cov(double lambda1, double lambda2, double rho, double T,
                                double lag, double tol) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
    throw std::invalid_argument("oracle_expected_cov: intensities must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("oracle_expected_cov: T must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("oracle_expected_cov: tol must be > 0");
  const double abs_lag = std::abs(lag);  // symmetric on average
  if (abs_lag > T) throw std::invalid_argument("oracle_expected_cov: |lag| must be <= T");
  if ((lambda1 + lambda2) * T > kOverflowGuard)
    throw NumericGuardError("oracle_expected_cov: (lambda1 + lambda2) * T exceeds 500");

  OracleValue out;
  out.lag = lag;
  if (abs_lag == T) {
    out.expected_cov = 0.0;  // the 1{lag < T} indicator kills every term
    return out;
  }
  if (std::abs(lambda1 - lambda2) / (lambda1 + lambda2) < kEqualLambdaSwitch)
    out.expected_cov = oracle_equal(0.5 * (lambda1 + lambda2), rho, T, abs_lag);
  else
    out.expected_cov = oracle_unequal(lambda1, lambda2, rho, T, abs_lag);
  return out;
}

double g_h(int n, int i, double h) {
  if (n < 1 || i < 0 || i > n) throw std::invalid_argument("g_h: need n >= 1, 0 <= i <= n");
  if (!(h >= 0.0) || !(h < 1.0)) throw std::invalid_argument("g_h: need h in [0, 1)");
  // g_h(n, i) = (1/n) P(Binomial(n, h) <= i); term ratio
  // t_{k+1}/t_k = h (n-k) / ((1-h)(k+1)).
  double term = std::pow(1.0 - h, n) / static_cast<double>(n);
  double sum = term;
  for (int k = 0; k < i; ++k) {
    term *= h * static_cast<double>(n - k) / ((1.0 - h) * static_cast<double>(k + 1));
    sum += term;
  }
  return sum;
}

McEstimate expectation_brute_force(double lambda1, double lambda2, double rho, double T,
                                   double lag, int n_reps, std::uint64_t seed) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0) || !(T > 0.0) || n_reps < 1)
    throw std::invalid_argument("expectation_brute_force: bad parameters");
  const double abs_lag = std::abs(lag);

  double sum = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < n_reps; ++rep) {
    auto rng = stats::Rng::substream(seed, static_cast<std::uint64_t>(rep));
    const auto t = poisson_grid(lambda1, T, rng);
    const auto s = poisson_grid(lambda2, T, rng);
    double total = 0.0;
    std::size_t j_lo = 1;
    for (std::size_t i = 1; i < t.size(); ++i) {
      while (j_lo < s.size() && s[j_lo] <= t[i - 1]) ++j_lo;
      for (std::size_t j = j_lo; j < s.size() && s[j - 1] < t[i]; ++j) {
        const double overlap = std::min(t[i], s[j]) - std::max(t[i - 1], s[j - 1]);
        if (overlap > 0.0 && s[j] - t[i - 1] > abs_lag) total += overlap;
      }
    }
    const double value = rho * total / T;
    sum += value;
    sum_sq += value * value;
  }
  McEstimate out;
  out.n_reps = n_reps;
  out.mean = sum / n_reps;
  if (n_reps > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / n_reps) / (n_reps - 1));
    out.stderr = std::sqrt(var / n_reps);
  }
  return out;
}

}  // namespace leadlag
