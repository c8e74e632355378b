// network.cpp
#include "leadlag/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace leadlag {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

LeadLagGraph build_mst(std::span<const PairSummary> pairs) {
  std::set<std::string> node_set;
  for (const auto& p : pairs) {
    if (p.a == p.b) throw std::invalid_argument("build_mst: self-pair " + p.a);
    node_set.insert(p.a);
    node_set.insert(p.b);
  }
  if (node_set.size() < 2) throw std::invalid_argument("build_mst: need >= 2 nodes");

  LeadLagGraph graph;
  graph.nodes.assign(node_set.begin(), node_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) index[graph.nodes[i]] = i;

  struct Candidate {
    double dist;
    std::string lo, hi;  // lexicographic pair id
    const PairSummary* summary;
  };
  std::vector<Candidate> candidates;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : pairs) {
    auto key = std::minmax(p.a, p.b);
    if (!seen.insert(key).second)
      throw std::invalid_argument("build_mst: duplicate pair " + key.first + "/" + key.second);
    candidates.push_back({std::sqrt(2.0 * (1.0 - p.max_corr)), key.first, key.second, &p});
  }

  // All C(n, 2) pairs must be present.
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < graph.nodes.size(); ++j)
      if (!seen.count({graph.nodes[i], graph.nodes[j]}))
        missing.push_back(graph.nodes[i] + "/" + graph.nodes[j]);
  if (!missing.empty()) {
    std::string msg = "build_mst: missing pair(s):";
    for (const auto& m : missing) msg += " " + m;
    throw std::invalid_argument(msg);
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });

  DisjointSet dsu(graph.nodes.size());
  for (const auto& c : candidates) {
    if (!dsu.unite(index[c.lo], index[c.hi])) continue;
    const PairSummary& p = *c.summary;
    GraphEdge edge;
    edge.rho = p.max_corr;
    if (p.llr > 1.0) {
      edge.from = p.a;
      edge.to = p.b;
      edge.llr = p.llr;
    } else if (p.llr < 1.0) {
      edge.from = p.b;
      edge.to = p.a;
      edge.llr = 1.0 / p.llr;
    } else {
      edge.from = c.lo;
      edge.to = c.hi;
      edge.llr = 1.0;
      edge.undirected = true;
    }
    graph.edges.push_back(std::move(edge));
    if (graph.edges.size() + 1 == graph.nodes.size()) break;
  }
  return graph;
}

}  // namespace leadlag
