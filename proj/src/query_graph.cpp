#include "isummary/query_graph.hpp"

#include <algorithm>
#include <map>

namespace isummary {

namespace {

bool isTypePredicate(const Term& t) { return t.isIri() && t.lexical == kRdfType; }

Direction flip(Direction d) {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}

std::size_t indexOf(const std::vector<Term>& sorted, const Term& t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  if (it == sorted.end() || *it != t) return sorted.size();
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

bool QueryGraph::hasNode(const Term& t) const {
  return std::binary_search(nodes.begin(), nodes.end(), t);
}

QueryGraph buildGraph(const ParsedQuery& query) {
  std::map<Term, Term> classOf;
  for (const auto& p : query.patterns) {
    if (p.subject.isVariable() && isTypePredicate(p.predicate) && p.object.isIri()) {
      auto [it, inserted] = classOf.emplace(p.subject, p.object);
      if (!inserted && p.object < it->second) it->second = p.object;
    }
  }
  auto relabel = [&](const Term& t) -> const Term& {
    if (t.isVariable()) {
      if (auto it = classOf.find(t); it != classOf.end()) return it->second;
    }
    return t;
  };

  QueryGraph g;
  g.sourceQueryId = query.id;
  for (const auto& p : query.patterns) {
    if (p.subject.isVariable() && isTypePredicate(p.predicate) && p.object.isIri()) {
      const Term& cls = classOf.at(p.subject);
      g.nodes.push_back(cls);
      if (p.object == cls) continue;  // absorbed
      g.edges.push_back({cls, p.predicate, p.object});
      g.nodes.push_back(p.object);
      continue;
    }
    const Term& a = relabel(p.subject);
    const Term& b = relabel(p.object);
    g.edges.push_back({a, p.predicate, b});
    g.nodes.push_back(a);
    g.nodes.push_back(b);
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  return g;
}

std::vector<Term> concreteNodes(const QueryGraph& graph) {
  std::vector<Term> out;
  for (const auto& n : graph.nodes) {
    if (n.isConcrete()) out.push_back(n);
  }
  return out;
}

std::vector<Triple> concreteEdges(const QueryGraph& graph) {
  std::vector<Triple> out;
  out.reserve(graph.edges.size());
  for (const auto& e : graph.edges) out.push_back({e.a, e.predicate, e.b});
  return out;
}

PathSignature canonicalSignature(const Term& start, const std::vector<PathStep>& steps) {
  PathSignature sig;
  const Term& end = steps.empty() ? start : steps.back().waypoint;
  std::vector<PathStep> oriented;
  if (end < start) {
    sig.from = end;
    sig.to = start;
    for (std::size_t i = steps.size(); i-- > 0;) {
      const Term& reached = i == 0 ? start : steps[i - 1].waypoint;
      oriented.push_back({steps[i].predicate, flip(steps[i].direction), reached});
    }
  } else {
    sig.from = start;
    sig.to = end;
    oriented = steps;
  }
  std::map<Term, Term> renamed;
  for (auto& step : oriented) {
    if (!step.waypoint.isVariable()) continue;
    auto [it, inserted] = renamed.emplace(
        step.waypoint, Term::variable("v" + std::to_string(renamed.size())));
    step.waypoint = it->second;
  }
  sig.steps = std::move(oriented);
  return sig;
}

std::vector<Triple> signatureTriples(const PathSignature& path) {
  std::vector<Triple> out;
  out.reserve(path.steps.size());
  const Term* previous = &path.from;
  for (const auto& step : path.steps) {
    if (step.direction == Direction::Forward) {
      out.push_back({*previous, step.predicate, step.waypoint});
    } else {
      out.push_back({step.waypoint, step.predicate, *previous});
    }
    previous = &step.waypoint;
  }
  return out;
}

std::optional<PathSignature> shortestPath(const QueryGraph& graph, const Term& x, const Term& y) {
  if (x == y) return std::nullopt;
  const std::size_t n = graph.nodes.size();
  const std::size_t ix = indexOf(graph.nodes, x);
  const std::size_t iy = indexOf(graph.nodes, y);
  if (ix == n || iy == n) return std::nullopt;

  struct Arc {
    std::size_t to;
    std::size_t edge;
    Direction direction;
  };
  std::vector<std::vector<Arc>> adjacency(n);
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    if (edge.predicate.isVariable() || edge.a == edge.b) continue;
    std::size_t a = indexOf(graph.nodes, edge.a);
    std::size_t b = indexOf(graph.nodes, edge.b);
    adjacency[a].push_back({b, e, Direction::Forward});
    adjacency[b].push_back({a, e, Direction::Backward});
  }

  const bool forwardOrder = !(y < x);
  const std::size_t source = forwardOrder ? ix : iy;
  const std::size_t target = forwardOrder ? iy : ix;

  // Distances to the target; the path is then grown greedily from the source
  // along arcs that stay on some shortest path.
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, kUnreached);
  std::vector<std::size_t> queue{target};
  dist[target] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t u = queue[head];
    for (const auto& arc : adjacency[u]) {
      if (dist[arc.to] == kUnreached) {
        dist[arc.to] = dist[u] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  if (dist[source] == kUnreached) return std::nullopt;

  PathSignature sig;
  sig.from = graph.nodes[source];
  sig.to = graph.nodes[target];
  std::vector<std::size_t> frontier{source};
  std::size_t variablesSeen = 0;
  for (std::size_t remaining = dist[source]; remaining > 0; --remaining) {
    std::optional<PathStep> best;
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (const auto& arc : adjacency[u]) {
        if (dist[arc.to] != remaining - 1) continue;
        const Term& node = graph.nodes[arc.to];
        PathStep step{graph.edges[arc.edge].predicate, arc.direction,
                      node.isVariable() ? Term::variable("v" + std::to_string(variablesSeen))
                                        : node};
        if (!best || step < *best) {
          best = std::move(step);
          next.assign(1, arc.to);
        } else if (step == *best) {
          next.push_back(arc.to);
        }
      }
    }
    if (best->waypoint.isVariable()) ++variablesSeen;
    sig.steps.push_back(std::move(*best));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
  }
  return sig;
}

}  // namespace isummary
