// test_network.cpp
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "leadlag/network.hpp"

using namespace leadlag;

namespace {

PairSummary pair(const std::string& a, const std::string& b, double corr, double llr) {
  PairSummary p;
  p.a = a;
  p.b = b;
  p.max_corr = corr;
  p.llr = llr;
  return p;
}

bool has_edge(const LeadLagGraph& g, const std::string& from, const std::string& to) {
  return std::any_of(g.edges.begin(), g.edges.end(), [&](const GraphEdge& e) {
    return e.from == from && e.to == to;
  });
}

bool is_spanning_tree(const LeadLagGraph& g) {
  if (g.edges.size() + 1 != g.nodes.size()) return false;
  std::map<std::string, std::string> parent;
  for (const auto& n : g.nodes) parent[n] = n;
  auto find = [&](std::string v) {
    while (parent[v] != v) v = parent[v];
    return v;
  };
  for (const auto& e : g.edges) {
    const auto ra = find(e.from), rb = find(e.to);
    if (ra == rb) return false;  // cycle
    parent[ra] = rb;
  }
  const auto root = find(g.nodes.front());
  return std::all_of(g.nodes.begin(), g.nodes.end(),
                     [&](const std::string& n) { return find(n) == root; });
}

}  // namespace

TEST_CASE("three-node MST keeps the two strongest correlations") {
  const std::vector<PairSummary> pairs{pair("A", "B", 0.9, 1.5), pair("A", "C", 0.5, 2.0),
                                       pair("B", "C", 0.4, 0.5)};
  const auto g = build_mst(pairs);
  REQUIRE(g.edges.size() == 2);
  CHECK(has_edge(g, "A", "B"));
  CHECK(has_edge(g, "A", "C"));
  CHECK(is_spanning_tree(g));
}

TEST_CASE("edge direction follows the LLR, inverted when needed") {
  const std::vector<PairSummary> pairs{pair("A", "B", 0.9, 0.25), pair("A", "C", 0.5, 2.0),
                                       pair("B", "C", 0.4, 1.0)};
  const auto g = build_mst(pairs);
  REQUIRE(g.edges.size() == 2);
  // LLR(A->B) = 0.25 < 1, so B leads A with inverted ratio 4.
  const auto it = std::find_if(g.edges.begin(), g.edges.end(),
                               [](const GraphEdge& e) { return e.from == "B" && e.to == "A"; });
  REQUIRE(it != g.edges.end());
  CHECK(it->llr == doctest::Approx(4.0));
  CHECK_FALSE(it->undirected);
}

TEST_CASE("equal correlations: deterministic lexicographic tie-break") {
  std::vector<PairSummary> pairs;
  const std::vector<std::string> names{"D", "B", "A", "C"};
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      pairs.push_back(pair(names[i], names[j], 0.5, 1.2));
  const auto g1 = build_mst(pairs);
  std::reverse(pairs.begin(), pairs.end());
  const auto g2 = build_mst(pairs);
  REQUIRE(g1.edges.size() == 3);
  // All distances equal: Kruskal visits pairs in lexicographic order, so the
  // tree is the star rooted at A.
  CHECK(is_spanning_tree(g1));
  for (const auto& e : g1.edges) CHECK((e.from == "A" || e.to == "A"));
  REQUIRE(g2.edges.size() == g1.edges.size());
  for (std::size_t k = 0; k < g1.edges.size(); ++k) {
    CHECK(g1.edges[k].from == g2.edges[k].from);
    CHECK(g1.edges[k].to == g2.edges[k].to);
  }
}

TEST_CASE("LLR exactly 1 marks the edge undirected") {
  const std::vector<PairSummary> pairs{pair("A", "B", 0.9, 1.0)};
  const auto g = build_mst(pairs);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].undirected);
  CHECK(g.edges[0].llr == 1.0);
}

TEST_CASE("star-shaped universe: the future is the hub with outward edges") {
  // One future F strongly correlated with every stock and leading them all;
  // stock/stock links are weaker.
  std::vector<PairSummary> pairs;
  const std::vector<std::string> stocks{"S1", "S2", "S3", "S4", "S5"};
  for (std::size_t i = 0; i < stocks.size(); ++i) {
    pairs.push_back(pair("F", stocks[i], 0.8 - 0.01 * static_cast<double>(i), 2.0));
    for (std::size_t j = i + 1; j < stocks.size(); ++j)
      pairs.push_back(pair(stocks[i], stocks[j], 0.4, 1.1));
  }
  const auto g = build_mst(pairs);
  REQUIRE(g.edges.size() == stocks.size());
  for (const auto& e : g.edges) {
    CHECK(e.from == "F");
    CHECK(e.llr == doctest::Approx(2.0));
  }
  CHECK(is_spanning_tree(g));
}

TEST_CASE("missing pairs are listed in the error") {
  const std::vector<PairSummary> pairs{pair("A", "B", 0.5, 1.2), pair("A", "C", 0.4, 1.2)};
  try {
    build_mst(pairs);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("B/C") != std::string::npos);
  }
}

TEST_CASE("tree properties and monotone-transform invariance on random instances") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> corr(-0.2, 0.95);
  std::uniform_real_distribution<double> ratio(0.3, 3.0);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 8);
    std::vector<PairSummary> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        pairs.push_back(pair("N" + std::to_string(i), "N" + std::to_string(j), corr(rng),
                             ratio(rng)));
    const auto g = build_mst(pairs);
    CHECK(is_spanning_tree(g));

    // d -> d^2 is strictly monotone: same tree edge set. d^2 = 2(1 - rho)
    // corresponds to rho' = 1 - 2 (1 - rho)^2.
    auto transformed = pairs;
    for (auto& p : transformed) p.max_corr = 1.0 - 2.0 * (1.0 - p.max_corr) * (1.0 - p.max_corr);
    const auto g2 = build_mst(transformed);
    auto key = [](const GraphEdge& e) {
      return e.from < e.to ? e.from + "|" + e.to : e.to + "|" + e.from;
    };
    std::set<std::string> e1, e2;
    for (const auto& e : g.edges) e1.insert(key(e));
    for (const auto& e : g2.edges) e2.insert(key(e));
    CHECK(e1 == e2);

    // Reversing every pair flips directions and inverts the stored LLR.
    auto reversed = pairs;
    for (auto& p : reversed) {
      std::swap(p.a, p.b);
      p.llr = 1.0 / p.llr;
    }
    const auto g3 = build_mst(reversed);
    REQUIRE(g3.edges.size() == g.edges.size());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      if (g.edges[k].undirected) continue;
      CHECK(g.edges[k].from == g3.edges[k].from);
      CHECK(g.edges[k].to == g3.edges[k].to);
      CHECK(g.edges[k].llr == doctest::Approx(g3.edges[k].llr).epsilon(1e-12));
    }
  }
}
