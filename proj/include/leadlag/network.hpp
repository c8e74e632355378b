// network.hpp: lead/lag network as a minimum spanning tree over pairwise
// maximum correlations, edges directed from leader to lagger.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "leadlag/types.hpp"

namespace leadlag {

struct PairSummary {
  std::string a;
  std::string b;
  double max_corr = 0.0;
  double llr = 1.0;  // LLR of (a leads b); > 1 means a leads
};

struct GraphEdge {
  std::string from;  // leader
  std::string to;    // lagger
  double rho = 0.0;
  double llr = 1.0;  // stored from the leader's perspective, >= 1
  bool undirected = false;  // LLR exactly 1
};

struct LeadLagGraph {
  std::vector<std::string> nodes;  // sorted
  std::vector<GraphEdge> edges;    // node count - 1 of them
};

// Kruskal MST on the distance d = sqrt(2 (1 - max_corr)); ties broken by the
// lexicographic (min-node, max-node) pair id. Every unordered pair must be
// present exactly once; missing pairs are reported in the error.
LeadLagGraph build_mst(std::span<const PairSummary> pairs);

}  // namespace leadlag
