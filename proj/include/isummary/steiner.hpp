#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "isummary/rng.hpp"

namespace isummary::steiner {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

/// Small undirected graph with non-negative node weights.
struct WeightedGraph {
  std::size_t nodeCount = 0;
  std::vector<double> weights;
  std::vector<Edge> edges;

  /// Throws InvalidInstance on negative weights, self-loops, bad ids.
  void validate() const;
  std::vector<std::vector<NodeId>> adjacency() const;
  /// Component label per node; labels are the least node id of the component.
  std::vector<NodeId> componentLabels() const;
};

struct SteinerInstance {
  WeightedGraph graph;
  std::vector<NodeId> terminals;  // the seeds
  std::size_t k = 0;

  /// terminals non-empty and distinct, |terminals| <= k <= nodeCount.
  void validate() const;
};

struct SteinerTree {
  std::vector<NodeId> nodes;  // ascending
  std::vector<Edge> edges;    // (min, max), ascending
};

/// Maps weights to costs `1 - (w - min) / (max - min)` (all zero when
/// max == min) and forces terminal costs to zero.
WeightedGraph normalizeToMinCost(const WeightedGraph& graph, std::span<const NodeId> terminals);

inline constexpr std::size_t kExactNodeLimit = 16;

/// Exhaustive search over connected k-node subsets containing the terminals:
/// maximum total weight, then the lexicographically least node set. Throws
/// SizeLimit above kExactNodeLimit nodes; nullopt when no subset qualifies.
std::optional<SteinerTree> exactSolve(const SteinerInstance& instance);

/// Cheapest insertion: grows a tree from the first terminal, each time
/// attaching the nearest missing target (terminals plus the k - lambda
/// cheapest other nodes) through its cheapest node-cost path. Ties go to the
/// lower node id. Throws Disconnected when a target is unreachable.
SteinerTree chins(const SteinerInstance& instance, std::span<const double> costs);

double totalWeight(const SteinerTree& tree, std::span<const double> weights);

/// Connected and |edges| == |nodes| - 1, every edge within the node set.
bool isTree(const SteinerTree& tree);

/// Outcome of comparing CHINS against the exact optimum on one instance,
/// both priced with the normalized costs.
struct BoundCheck {
  bool feasible = false;  // exactSolve found a tree
  double exactWeight = 0;
  double exactCost = 0;
  double chinsCost = 0;
  double ratio = 0;  // chinsCost / exactCost, 1 when both are zero
  std::size_t chinsNodes = 0;
  bool withinBound = false;  // chinsCost <= 2 * exactCost
};

BoundCheck checkApproximation(const SteinerInstance& instance);

/// `n m t k`, n weights, m edges `u v`, t terminal ids; whitespace separated.
SteinerInstance readInstance(std::istream& in);
void writeInstance(std::ostream& out, const SteinerInstance& instance);

/// Connected G(n, p) instance: n uniform in [minNodes, maxNodes], weights
/// uniform in [0,1), 1 or 2 terminals, k uniform in [lambda, min(maxK, n)].
SteinerInstance randomInstance(Rng& rng, std::size_t minNodes, std::size_t maxNodes,
                               std::size_t maxK, double edgeProbability);

}  // namespace isummary::steiner
