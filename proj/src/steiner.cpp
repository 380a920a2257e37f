#include "isummary/steiner.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <string>

#include "isummary/errors.hpp"

namespace isummary::steiner {

void WeightedGraph::validate() const {
  if (weights.size() != nodeCount) throw InvalidInstance("weight count differs from node count");
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidInstance("node weights must be non-negative");
  }
  for (const auto& [u, v] : edges) {
    if (u >= nodeCount || v >= nodeCount) throw InvalidInstance("edge endpoint out of range");
    if (u == v) throw InvalidInstance("self-loop on node " + std::to_string(u));
  }
}

std::vector<std::vector<NodeId>> WeightedGraph::adjacency() const {
  std::vector<std::vector<NodeId>> adj(nodeCount);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::vector<NodeId> WeightedGraph::componentLabels() const {
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> label(nodeCount, kNone);
  auto adj = adjacency();
  for (NodeId root = 0; root < nodeCount; ++root) {
    if (label[root] != kNone) continue;
    std::vector<NodeId> stack{root};
    label[root] = root;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : adj[u]) {
        if (label[v] == kNone) {
          label[v] = root;
          stack.push_back(v);
        }
      }
    }
  }
  return label;
}

void SteinerInstance::validate() const {
  graph.validate();
  if (terminals.empty()) throw InvalidInstance("at least one terminal is required");
  std::set<NodeId> distinct(terminals.begin(), terminals.end());
  if (distinct.size() != terminals.size()) throw InvalidInstance("duplicate terminals");
  for (NodeId t : terminals) {
    if (t >= graph.nodeCount) throw InvalidInstance("terminal out of range");
  }
  if (k < terminals.size() || k > graph.nodeCount)
    throw InvalidInstance("k must lie between the terminal count and the node count");
}

WeightedGraph normalizeToMinCost(const WeightedGraph& graph, std::span<const NodeId> terminals) {
  WeightedGraph out = graph;
  if (graph.weights.empty()) return out;
  auto [lo, hi] = std::minmax_element(graph.weights.begin(), graph.weights.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& w : out.weights) w = range > 0.0 ? 1.0 - (w - min) / range : 0.0;
  for (NodeId t : terminals) out.weights.at(t) = 0.0;
  return out;
}

namespace {

using Mask = std::uint32_t;

bool inducedConnected(Mask mask, const std::vector<Mask>& neighbourMask) {
  Mask start = mask & (~mask + 1);
  Mask reached = start;
  Mask frontier = start;
  while (frontier != 0) {
    Mask next = 0;
    for (Mask f = frontier; f != 0; f &= f - 1) {
      next |= neighbourMask[static_cast<std::size_t>(std::countr_zero(f))];
    }
    next &= mask & ~reached;
    reached |= next;
    frontier = next;
  }
  return reached == mask;
}

std::vector<NodeId> maskNodes(Mask mask) {
  std::vector<NodeId> out;
  for (Mask m = mask; m != 0; m &= m - 1) out.push_back(static_cast<NodeId>(std::countr_zero(m)));
  return out;
}

SteinerTree spanningTree(const std::vector<NodeId>& nodes,
                         const std::vector<std::vector<NodeId>>& adj) {
  SteinerTree tree;
  tree.nodes = nodes;
  std::set<NodeId> inSet(nodes.begin(), nodes.end());
  std::set<NodeId> seen{nodes.front()};
  std::queue<NodeId> queue;
  queue.push(nodes.front());
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop();
    for (NodeId v : adj[u]) {
      if (inSet.count(v) && seen.insert(v).second) {
        tree.edges.emplace_back(std::min(u, v), std::max(u, v));
        queue.push(v);
      }
    }
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

}  // namespace

std::optional<SteinerTree> exactSolve(const SteinerInstance& instance) {
  const auto& g = instance.graph;
  if (g.nodeCount > kExactNodeLimit) {
    throw SizeLimit("exact search supports at most " + std::to_string(kExactNodeLimit) +
                    " nodes, got " + std::to_string(g.nodeCount));
  }
  instance.validate();
  const auto adj = g.adjacency();
  std::vector<Mask> neighbourMask(g.nodeCount, 0);
  for (NodeId u = 0; u < g.nodeCount; ++u) {
    for (NodeId v : adj[u]) neighbourMask[u] |= Mask{1} << v;
  }
  Mask required = 0;
  for (NodeId t : instance.terminals) required |= Mask{1} << t;

  std::optional<Mask> best;
  double bestWeight = -1.0;
  std::vector<NodeId> bestNodes;
  const Mask limit = Mask{1} << g.nodeCount;
  // Gosper's hack over all masks with exactly k bits.
  for (Mask mask = (Mask{1} << instance.k) - 1; mask < limit;) {
    if ((mask & required) == required && inducedConnected(mask, neighbourMask)) {
      std::vector<NodeId> nodes = maskNodes(mask);
      double weight = 0.0;
      for (NodeId v : nodes) weight += g.weights[v];
      if (!best || weight > bestWeight || (weight == bestWeight && nodes < bestNodes)) {
        best = mask;
        bestWeight = weight;
        bestNodes = std::move(nodes);
      }
    }
    if (mask == 0) break;
    Mask c = mask & (~mask + 1);
    Mask r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  if (!best) return std::nullopt;
  return spanningTree(bestNodes, adj);
}

SteinerTree chins(const SteinerInstance& instance, std::span<const double> costs) {
  instance.validate();
  const auto& g = instance.graph;
  if (costs.size() != g.nodeCount) throw InvalidInstance("cost count differs from node count");
  const auto labels = g.componentLabels();
  const NodeId component = labels[instance.terminals.front()];
  for (NodeId t : instance.terminals) {
    if (labels[t] != component) throw Disconnected("terminals lie in different components");
  }

  std::set<NodeId> terminalSet(instance.terminals.begin(), instance.terminals.end());
  std::vector<NodeId> candidates;
  for (NodeId v = 0; v < g.nodeCount; ++v) {
    if (!terminalSet.count(v) && labels[v] == component) candidates.push_back(v);
  }
  const std::size_t extra = instance.k - instance.terminals.size();
  if (candidates.size() < extra) {
    throw Disconnected("the terminals' component has fewer than k nodes");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](NodeId a, NodeId b) { return costs[a] < costs[b]; });
  std::set<NodeId> missing(instance.terminals.begin() + 1, instance.terminals.end());
  missing.insert(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(extra));

  const auto adj = g.adjacency();
  std::vector<bool> inTree(g.nodeCount, false);
  inTree[instance.terminals.front()] = true;
  SteinerTree tree;
  tree.nodes.push_back(instance.terminals.front());

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  while (!missing.empty()) {
    // Multi-source Dijkstra from the current tree; entering a node outside
    // the tree costs that node's cost.
    std::vector<double> dist(g.nodeCount, kInf);
    std::vector<NodeId> parent(g.nodeCount, kNone);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (NodeId v = 0; v < g.nodeCount; ++v) {
      if (inTree[v]) {
        dist[v] = 0.0;
        heap.emplace(0.0, v);
      }
    }
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (NodeId v : adj[u]) {
        double nd = d + (inTree[v] ? 0.0 : costs[v]);
        if (nd < dist[v]) {
          dist[v] = nd;
          parent[v] = u;
          heap.emplace(nd, v);
        }
      }
    }
    NodeId target = kNone;
    for (NodeId t : missing) {
      if (target == kNone || dist[t] < dist[target]) target = t;
    }
    if (dist[target] == kInf) throw Disconnected("target node " + std::to_string(target) + " is unreachable");
    for (NodeId v = target; !inTree[v]; v = parent[v]) {
      inTree[v] = true;
      tree.nodes.push_back(v);
      tree.edges.emplace_back(std::min(v, parent[v]), std::max(v, parent[v]));
      missing.erase(v);
    }
  }
  std::sort(tree.nodes.begin(), tree.nodes.end());
  std::sort(tree.edges.begin(), tree.edges.end());
  return tree;
}

double totalWeight(const SteinerTree& tree, std::span<const double> weights) {
  double total = 0.0;
  for (NodeId v : tree.nodes) total += weights[v];
  return total;
}

bool isTree(const SteinerTree& tree) {
  if (tree.nodes.empty()) return false;
  if (tree.edges.size() + 1 != tree.nodes.size()) return false;
  std::set<NodeId> nodes(tree.nodes.begin(), tree.nodes.end());
  if (nodes.size() != tree.nodes.size()) return false;
  std::set<NodeId> reached{tree.nodes.front()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [u, v] : tree.edges) {
      if (!nodes.count(u) || !nodes.count(v)) return false;
      if (reached.count(u) != reached.count(v)) {
        reached.insert(u);
        reached.insert(v);
        grew = true;
      }
    }
  }
  return reached.size() == nodes.size();
}

BoundCheck checkApproximation(const SteinerInstance& instance) {
  constexpr double kSlack = 1e-12;
  BoundCheck check;
  const WeightedGraph costs = normalizeToMinCost(instance.graph, instance.terminals);
  auto exact = exactSolve(instance);
  if (!exact) return check;
  check.feasible = true;
  check.exactWeight = totalWeight(*exact, instance.graph.weights);
  check.exactCost = totalWeight(*exact, costs.weights);
  SteinerTree approx = chins(instance, costs.weights);
  check.chinsCost = totalWeight(approx, costs.weights);
  check.chinsNodes = approx.nodes.size();
  if (check.exactCost > kSlack) {
    check.ratio = check.chinsCost / check.exactCost;
    check.withinBound = check.chinsCost <= 2.0 * check.exactCost + kSlack;
  } else {
    check.ratio = check.chinsCost > kSlack ? std::numeric_limits<double>::infinity() : 1.0;
    check.withinBound = check.chinsCost <= kSlack;
  }
  return check;
}

SteinerInstance readInstance(std::istream& in) {
  SteinerInstance inst;
  std::size_t m = 0, t = 0;
  if (!(in >> inst.graph.nodeCount >> m >> t >> inst.k))
    throw InvalidInstance("expected header 'n m t k'");
  inst.graph.weights.resize(inst.graph.nodeCount);
  for (auto& w : inst.graph.weights) {
    if (!(in >> w)) throw InvalidInstance("expected node weight");
  }
  inst.graph.edges.resize(m);
  for (auto& [u, v] : inst.graph.edges) {
    if (!(in >> u >> v)) throw InvalidInstance("expected edge 'u v'");
  }
  inst.terminals.resize(t);
  for (auto& id : inst.terminals) {
    if (!(in >> id)) throw InvalidInstance("expected terminal id");
  }
  inst.validate();
  return inst;
}

void writeInstance(std::ostream& out, const SteinerInstance& instance) {
  const auto& g = instance.graph;
  out << g.nodeCount << ' ' << g.edges.size() << ' ' << instance.terminals.size() << ' '
      << instance.k << '\n';
  auto precision = out.precision(17);
  for (std::size_t i = 0; i < g.weights.size(); ++i) out << (i ? " " : "") << g.weights[i];
  out.precision(precision);
  out << '\n';
  for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
  for (std::size_t i = 0; i < instance.terminals.size(); ++i)
    out << (i ? " " : "") << instance.terminals[i];
  out << '\n';
}

SteinerInstance randomInstance(Rng& rng, std::size_t minNodes, std::size_t maxNodes,
                               std::size_t maxK, double edgeProbability) {
  SteinerInstance inst;
  auto& g = inst.graph;
  g.nodeCount = minNodes + static_cast<std::size_t>(rng.below(maxNodes - minNodes + 1));
  do {
    g.edges.clear();
    for (NodeId u = 0; u < g.nodeCount; ++u) {
      for (NodeId v = u + 1; v < g.nodeCount; ++v) {
        if (rng.uniform() < edgeProbability) g.edges.emplace_back(u, v);
      }
    }
    g.weights.assign(g.nodeCount, 0.0);
    auto labels = g.componentLabels();
    if (std::all_of(labels.begin(), labels.end(), [](NodeId l) { return l == 0; })) break;
  } while (true);
  for (auto& w : g.weights) w = rng.uniform();

  const std::size_t lambda = std::min<std::size_t>(1 + rng.below(2), g.nodeCount);
  std::vector<NodeId> ids(g.nodeCount);
  for (NodeId v = 0; v < g.nodeCount; ++v) ids[v] = v;
  sampleToFront(std::span<NodeId>(ids), lambda, rng);
  inst.terminals.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(lambda));
  const std::size_t kMax = std::min(maxK, g.nodeCount);
  inst.k = lambda + static_cast<std::size_t>(rng.below(kMax - lambda + 1));
  return inst;
}

}  // namespace isummary::steiner
