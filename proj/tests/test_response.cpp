// test_response.cpp
#include <doctest.h>

#include <cmath>
#include <map>

#include "leadlag/response.hpp"

using namespace leadlag;

namespace {

QuoteEvent quote(Milliseconds ts, double bid, double ask) {
  QuoteEvent q;
  q.ts_ms = ts;
  q.bid = bid;
  q.ask = ask;
  q.bid_qty = q.ask_qty = 1.0;
  return q;
}

const ResponseCurve& find_curve(const std::vector<ResponseCurve>& curves, ResponseVariable v,
                                int theta) {
  for (const auto& c : curves)
    if (c.variable == v && c.theta_halfticks == theta) return c;
  throw std::runtime_error("curve not found");
}

}  // namespace

TEST_CASE("frozen lagger quotes give identically zero self-responses") {
  ResponseDay day;
  double m = 100.0;
  day.leader.push_back(0.0, m);
  for (int i = 1; i <= 50; ++i) {
    m += (i % 2 ? 1.0 : -1.0) * 0.5;
    day.leader.push_back(static_cast<double>(i), m);
  }
  day.lagger_quotes.push_back(quote(0, 49.99, 50.01));

  const auto curves = response_curves(std::vector<ResponseDay>{day}, 0.5, 0.01);
  for (const auto& c : curves) {
    for (std::size_t k = 0; k < c.lags.size(); ++k) {
      if (!c.values[k].has_value()) continue;
      if (c.variable == ResponseVariable::bid_vs_self ||
          c.variable == ResponseVariable::ask_vs_self ||
          c.variable == ResponseVariable::spread_vs_self)
        CHECK(*c.values[k] == 0.0);
    }
  }
}

TEST_CASE("lag-0 self deviations vanish and counts never increase in the lag") {
  ResponseDay day;
  double m = 100.0;
  day.leader.push_back(0.0, m);
  for (int i = 1; i <= 200; ++i) {
    m += ((i * 7) % 3 == 0 ? 1.0 : -1.0) * 0.5;
    day.leader.push_back(0.37 * i, m);
  }
  double bid = 49.99;
  for (int i = 0; i <= 400; ++i) {
    day.lagger_quotes.push_back(quote(static_cast<Milliseconds>(i * 190), bid, bid + 0.02));
    bid += ((i * 5) % 4 == 0 ? 1.0 : -0.25) * 0.01;
  }
  const auto curves = response_curves(std::vector<ResponseDay>{day}, 0.5, 0.01);
  for (const auto& c : curves) {
    for (std::size_t k = 1; k < c.counts.size(); ++k) CHECK(c.counts[k] <= c.counts[k - 1]);
    if (c.variable == ResponseVariable::bid_vs_self ||
        c.variable == ResponseVariable::ask_vs_self ||
        c.variable == ResponseVariable::spread_vs_self) {
      if (c.counts[0] > 0) CHECK(*c.values[0] == 0.0);
    }
  }
}

TEST_CASE("deterministic lifter: both quotes jump one tick 1.05 s after up-moves") {
  // Leader moves +1 tick at t = 10, 20, 30, ...; the lagger lifts bid and ask
  // by one tick 1.05 s later (safely between grid lags) and holds. The next
  // leader move censors at +10 s.
  ResponseDay day;
  const double leader_tick = 0.5;
  const double lagger_tick = 0.01;
  double lm = 4000.0;
  double lb = 50.0;
  day.leader.push_back(0.0, lm);
  day.lagger_quotes.push_back(quote(0, lb, lb + 2 * lagger_tick));
  for (int i = 1; i <= 60; ++i) {
    lm += leader_tick;
    day.leader.push_back(10.0 * i, lm);
    lb += lagger_tick;
    day.lagger_quotes.push_back(
        quote(static_cast<Milliseconds>(10000 * i + 1050), lb, lb + 2 * lagger_tick));
  }

  const auto curves = response_curves(std::vector<ResponseDay>{day}, leader_tick, lagger_tick);
  const auto& bid_self = find_curve(curves, ResponseVariable::bid_vs_self, 2);
  for (std::size_t k = 0; k < bid_self.lags.size(); ++k) {
    if (!bid_self.values[k].has_value() || bid_self.counts[k] == 0) continue;
    const double expected = bid_self.lags[k] < 1.05 ? 0.0 : 1.0;
    CHECK(*bid_self.values[k] == doctest::Approx(expected));
  }
  // Spread is constant here, so the spread response is identically zero.
  const auto& spread_self = find_curve(curves, ResponseVariable::spread_vs_self, 2);
  for (std::size_t k = 0; k < spread_self.lags.size(); ++k)
    if (spread_self.values[k].has_value()) CHECK(*spread_self.values[k] == 0.0);
}

TEST_CASE("censoring matches a brute-force scan on a small instance") {
  ResponseDay day;
  const double leader_tick = 1.0;
  const double lagger_tick = 0.1;
  day.leader.push_back(0.0, 100.0);
  day.leader.push_back(1.0, 101.0);   // +1.0 = +2 half-ticks
  day.leader.push_back(1.35, 100.0);  // censors the first move after 0.35 s
  day.leader.push_back(4.0, 101.5);   // +1.5
  const std::vector<std::pair<double, std::pair<double, double>>> qs{
      {0.0, {50.0, 50.3}}, {1.1, {50.2, 50.4}}, {1.5, {49.9, 50.6}}, {4.2, {50.5, 50.8}}};
  for (const auto& [t, ba] : qs)
    day.lagger_quotes.push_back(
        quote(static_cast<Milliseconds>(t * 1000), ba.first, ba.second));

  ResponseOptions opts;
  opts.thetas_halfticks = {2};
  opts.max_lag_s = 3.0;
  opts.lag_step_s = 0.1;
  const auto curves = response_curves(std::vector<ResponseDay>{day}, leader_tick, lagger_tick,
                                      opts);

  // Brute force: enumerate qualifying events and valid (event, lag) pairs.
  struct Ev {
    double t, censor, bid0, ask0;
  };
  std::vector<Ev> events;
  for (std::size_t i = 0; i + 1 < day.leader.size(); ++i) {
    const double r = day.leader.m[i + 1] - day.leader.m[i];
    if (r < 2 * leader_tick / 2.0) continue;  // theta = +2 half-ticks
    const double t = day.leader.t[i + 1];
    const double censor = (i + 2 < day.leader.size())
                              ? day.leader.t[i + 2]
                              : std::numeric_limits<double>::infinity();
    const QuoteEvent* q0 = nullptr;
    for (const auto& q : day.lagger_quotes)
      if (ms_to_s(q.ts_ms) <= t) q0 = &q;
    if (q0) events.push_back({t, censor, q0->bid, q0->ask});
  }
  REQUIRE(events.size() == 2);  // the +1.0 and +1.5 moves

  const auto& bid_self = find_curve(curves, ResponseVariable::bid_vs_self, 2);
  for (std::size_t k = 0; k < bid_self.lags.size(); ++k) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& ev : events) {
      const double tl = ev.t + bid_self.lags[k];
      if (!(tl < ev.censor)) continue;
      const QuoteEvent* q = nullptr;
      for (const auto& qq : day.lagger_quotes)
        if (ms_to_s(qq.ts_ms) <= tl) q = &qq;
      if (!q) continue;
      sum += (q->bid - ev.bid0) / lagger_tick;
      ++count;
    }
    CHECK(bid_self.counts[k] == count);
    if (count > 0) CHECK(*bid_self.values[k] == doctest::Approx(sum / count).epsilon(1e-12));
    // Censoring correctness: every retained lag is strictly inside.
    if (count == 2) CHECK(bid_self.lags[k] < 0.35);
  }
}

TEST_CASE("sign coherence and the no-free-lunch shape on a correlated synthetic pair") {
  // The lagger tracks the leader's direction with a persistent spread, so
  // *_vs_self follows the threshold sign and bid_vs_opposite stays strictly
  // negative (no crossing).
  ResponseDay day;
  const double leader_tick = 0.5;
  const double lagger_tick = 0.01;
  const double half_spread = 2 * lagger_tick;  // 4-tick spread, never crossed
  double lm = 4000.0, mid = 50.0;
  day.leader.push_back(0.0, lm);
  day.lagger_quotes.push_back(quote(0, mid - half_spread, mid + half_spread));
  for (int i = 1; i <= 400; ++i) {
    const double dir = ((i * 13) % 5 < 3) ? 1.0 : -1.0;
    lm += dir * leader_tick;
    day.leader.push_back(5.0 * i, lm);
    mid += dir * lagger_tick;  // follows 1 s later, well within the tick grid
    day.lagger_quotes.push_back(
        quote(static_cast<Milliseconds>(5000 * i + 1000), mid - half_spread,
              mid + half_spread));
  }
  const auto curves = response_curves(std::vector<ResponseDay>{day}, leader_tick, lagger_tick);
  for (int theta : {2, -2}) {
    const auto& bid_self = find_curve(curves, ResponseVariable::bid_vs_self, theta);
    double late = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < bid_self.lags.size(); ++k) {
      if (bid_self.lags[k] >= 2.0 && bid_self.values[k].has_value() &&
          bid_self.counts[k] > 10) {
        late += *bid_self.values[k];
        ++n;
      }
    }
    REQUIRE(n > 0);
    CHECK((theta > 0 ? late > 0.0 : late < 0.0));
  }
  const auto& bvo = find_curve(curves, ResponseVariable::bid_vs_opposite, 2);
  for (std::size_t k = 0; k < bvo.lags.size(); ++k)
    if (bvo.values[k].has_value() && bvo.counts[k] > 0) CHECK(*bvo.values[k] < 0.0);
}

TEST_CASE("spread response equals ask minus bid response on the shared sample") {
  ResponseDay day;
  double lm = 100.0, bid = 50.0, spread = 0.05;
  day.leader.push_back(0.0, lm);
  day.lagger_quotes.push_back(quote(0, bid, bid + spread));
  for (int i = 1; i <= 300; ++i) {
    lm += ((i * 11) % 4 < 2 ? 1.0 : -1.0) * 0.5;
    day.leader.push_back(3.1 * i, lm);
    bid += ((i * 3) % 5 < 2 ? 1.0 : -1.0) * 0.01;
    spread = 0.03 + 0.02 * ((i * 7) % 3);
    day.lagger_quotes.push_back(
        quote(static_cast<Milliseconds>(3100 * i + 700), bid, bid + spread));
  }
  const auto curves = response_curves(std::vector<ResponseDay>{day}, 0.5, 0.01);
  for (int theta : {1, -1, 3}) {
    const auto& s = find_curve(curves, ResponseVariable::spread_vs_self, theta);
    const auto& a = find_curve(curves, ResponseVariable::ask_vs_self, theta);
    const auto& b = find_curve(curves, ResponseVariable::bid_vs_self, theta);
    for (std::size_t k = 0; k < s.lags.size(); ++k) {
      CHECK(s.counts[k] == a.counts[k]);
      if (!s.values[k].has_value()) continue;
      CHECK(*s.values[k] == doctest::Approx(*a.values[k] - *b.values[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("no qualifying events leaves an empty curve, reported not fatal") {
  ResponseDay day;
  day.leader.push_back(0.0, 100.0);
  day.leader.push_back(1.0, 100.01);  // far below one half-tick of 0.5
  day.lagger_quotes.push_back(quote(0, 50.0, 50.1));
  const auto curves = response_curves(std::vector<ResponseDay>{day}, 0.5, 0.01);
  const auto& c = find_curve(curves, ResponseVariable::bid_vs_self, 6);
  for (std::size_t k = 0; k < c.lags.size(); ++k) {
    CHECK(c.counts[k] == 0);
    CHECK_FALSE(c.values[k].has_value());
  }
}
