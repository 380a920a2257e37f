#include "isummary/summarizer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "isummary/errors.hpp"
#include "isummary/rng.hpp"

namespace isummary {

Strategy parseStrategy(std::string_view name) {
  if (name == "isummary") return Strategy::ISummary;
  if (name == "random") return Strategy::Random;
  throw InvalidRequest("unknown strategy '" + std::string(name) + "'");
}

std::string_view strategyName(Strategy strategy) {
  return strategy == Strategy::ISummary ? "isummary" : "random";
}

std::string_view warningKindName(WarningKind kind) {
  switch (kind) {
    case WarningKind::IsolatedNode: return "IsolatedNode";
    case WarningKind::UnresolvedVariable: return "UnresolvedVariable";
    case WarningKind::ResolvedVariable: return "ResolvedVariable";
    case WarningKind::IntermediateNode: return "IntermediateNode";
    case WarningKind::BudgetShortfall: return "BudgetShortfall";
    case WarningKind::MultiSeedFallback: return "MultiSeedFallback";
    case WarningKind::NoMatchingTestQueries: return "NoMatchingTestQueries";
    case WarningKind::SeedSamplingShortfall: return "SeedSamplingShortfall";
  }
  return "Unknown";
}

bool Summary::hasWarning(WarningKind kind) const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [kind](const Warning& w) { return w.kind == kind; });
}

std::size_t Summary::totalFrequency() const {
  std::size_t total = 0;
  for (const auto& n : nodes) total += n.frequency;
  return total;
}

std::vector<NodeWeight> selectTopNodes(const WorkloadStore& store,
                                       std::span<const QueryId> relevant, std::size_t count,
                                       std::span<const Term> exclude) {
  std::unordered_map<Term, std::size_t, TermHash> frequency;
  for (QueryId id : relevant) {
    // graph nodes are unique per query, so this counts distinct queries
    for (const auto& node : store.graph(id).nodes) {
      if (node.isConcrete()) ++frequency[node];
    }
  }
  for (const auto& t : exclude) frequency.erase(t);

  std::vector<NodeWeight> ranked;
  ranked.reserve(frequency.size());
  for (auto& [term, f] : frequency) ranked.push_back({term, f});
  auto better = [](const NodeWeight& a, const NodeWeight& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.term < b.term;
  };
  std::size_t keep = std::min(count, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep),
                    ranked.end(), better);
  ranked.resize(keep);
  return ranked;
}

std::optional<PathSignature> link(const WorkloadStore& store, std::span<const QueryId> relevant,
                                  const Term& x, std::span<const Term> visited,
                                  Execution execution) {
  std::map<PathSignature, std::size_t> tally;
  for (const auto& y : visited) {
    const Term pair[] = {x, y};
    const std::vector<QueryId> ids = filter(store, pair, relevant);
    std::vector<std::optional<PathSignature>> paths(ids.size());
    const auto n = static_cast<std::int64_t>(ids.size());
    if (execution == Execution::Parallel && n >= 256) {
#pragma omp parallel for schedule(dynamic, 32) num_threads(threadCount())
      for (std::int64_t i = 0; i < n; ++i) paths[i] = shortestPath(store.graph(ids[i]), x, y);
    } else {
      for (std::int64_t i = 0; i < n; ++i) paths[i] = shortestPath(store.graph(ids[i]), x, y);
    }
    for (auto& p : paths) {
      if (p) ++tally[std::move(*p)];
    }
  }
  const std::pair<const PathSignature, std::size_t>* best = nullptr;
  for (const auto& entry : tally) {
    if (best == nullptr || entry.second > best->second ||
        (entry.second == best->second && entry.first.length() < best->first.length())) {
      best = &entry;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->first;
}

namespace {

enum class Side { Subject, Object };

struct Position {
  Term predicate;
  Side side;
  auto operator<=>(const Position&) const = default;
};

Term mostFrequentFiller(const std::set<Position>& positions, const WorkloadStore& store,
                        std::size_t& support) {
  // Only queries mentioning one of the predicates can hold a matching edge.
  std::set<QueryId> candidates;
  for (const auto& pos : positions) {
    for (QueryId id : store.postings(pos.predicate)) candidates.insert(id);
  }
  std::map<Term, std::size_t> score;
  // (term, position) pairs already counted for the current query
  std::vector<std::pair<const Term*, const Position*>> seen;
  auto tally = [&](const Term& term, const Term& predicate, Side side) {
    auto it = positions.find(Position{predicate, side});
    if (it == positions.end()) return;
    const Position* pos = &*it;
    const bool counted = std::any_of(seen.begin(), seen.end(), [&](const auto& entry) {
      return entry.second == pos && *entry.first == term;
    });
    if (!counted) {
      seen.emplace_back(&term, pos);
      ++score[term];
    }
  };
  for (QueryId id : candidates) {
    seen.clear();
    for (const auto& e : store.graph(id).edges) {
      if (e.a.isConcrete()) tally(e.a, e.predicate, Side::Subject);
      if (e.b.isConcrete()) tally(e.b, e.predicate, Side::Object);
    }
  }
  const std::pair<const Term, std::size_t>* best = nullptr;
  for (const auto& entry : score) {
    if (best == nullptr || entry.second > best->second) best = &entry;
  }
  if (best == nullptr) {
    support = 0;
    return {};
  }
  support = best->second;
  return best->first;
}

}  // namespace

Resolution resolveTriples(std::vector<Triple> triples, const WorkloadStore& store,
                          BlankNodeAllocator& blanks) {
  // Variables in first-appearance order, with the positions they occupy.
  std::vector<Term> order;
  std::map<Term, std::set<Position>> positions;
  for (const auto& t : triples) {
    if (t.predicate.isVariable()) continue;
    if (t.subject.isVariable()) {
      if (!positions.count(t.subject)) order.push_back(t.subject);
      positions[t.subject].insert({t.predicate, Side::Subject});
    }
    if (t.object.isVariable()) {
      if (!positions.count(t.object)) order.push_back(t.object);
      positions[t.object].insert({t.predicate, Side::Object});
    }
  }

  Resolution out;
  std::map<Term, Term> substitution;
  for (const auto& v : order) {
    std::size_t support = 0;
    Term filler = mostFrequentFiller(positions[v], store, support);
    if (support > 0) {
      out.warnings.push_back({WarningKind::ResolvedVariable, filler,
                              "?" + v.lexical + " mined from " + std::to_string(support) +
                                  " position matches"});
    } else {
      filler = blanks.next();
      out.warnings.push_back({WarningKind::UnresolvedVariable, filler, "?" + v.lexical});
    }
    substitution.emplace(v, std::move(filler));
  }
  auto apply = [&](Term& t) {
    if (auto it = substitution.find(t); it != substitution.end()) t = it->second;
  };
  for (auto& t : triples) {
    apply(t.subject);
    apply(t.object);
  }
  out.triples = std::move(triples);
  return out;
}

Resolution resolveVariables(const PathSignature& path, const WorkloadStore& store,
                            BlankNodeAllocator& blanks) {
  return resolveTriples(signatureTriples(path), store, blanks);
}

namespace {

void validate(const WorkloadStore& store, const SummaryRequest& request) {
  if (request.seeds.empty()) throw InvalidRequest("at least one seed is required");
  if (request.k < request.seeds.size()) {
    throw InvalidRequest("k (" + std::to_string(request.k) + ") is smaller than the number of seeds (" +
                         std::to_string(request.seeds.size()) + ")");
  }
  for (const auto& s : request.seeds) {
    if (s.isVariable()) throw InvalidRequest("seed ?" + s.lexical + " is a variable");
  }
  std::set<Term> distinct(request.seeds.begin(), request.seeds.end());
  if (distinct.size() != request.seeds.size()) throw InvalidRequest("duplicate seeds");
  if (store.empty()) throw InvalidRequest("empty workload");
}

class SummaryBuilder {
 public:
  explicit SummaryBuilder(Summary& summary) : summary_(summary) {}

  void addNode(NodeWeight node) {
    nodeSet_.insert(node.term);
    summary_.nodes.push_back(std::move(node));
  }

  void addResolution(Resolution resolution) {
    for (auto& t : resolution.triples) {
      if (tripleSet_.insert(t).second) summary_.triples.push_back(std::move(t));
    }
    for (auto& w : resolution.warnings) {
      if (w.kind == WarningKind::ResolvedVariable) mined_.insert(w.term);
      summary_.warnings.push_back(std::move(w));
    }
  }

  void warn(WarningKind kind, Term term, std::string detail) {
    summary_.warnings.push_back({kind, std::move(term), std::move(detail)});
  }

  // Concrete triple endpoints that are neither nodes nor mined resources.
  void flagIntermediates() {
    std::set<Term> flagged;
    for (const auto& t : summary_.triples) {
      for (const Term* e : {&t.subject, &t.object}) {
        if (e->isConcrete() && e->kind != TermKind::Blank && !nodeSet_.count(*e) &&
            !mined_.count(*e) && flagged.insert(*e).second) {
          warn(WarningKind::IntermediateNode, *e, "path waypoint");
        }
      }
    }
  }

 private:
  Summary& summary_;
  std::set<Term> nodeSet_;
  std::set<Term> mined_;
  std::set<Triple> tripleSet_;
};

std::vector<QueryId> relevantQueries(const WorkloadStore& store, const SummaryRequest& request,
                                     SummaryBuilder& builder) {
  std::vector<QueryId> relevant = filter(store, request.seeds);
  if (relevant.empty() && request.seeds.size() > 1) {
    std::set<QueryId> merged;
    for (const auto& s : request.seeds) {
      const Term one[] = {s};
      for (QueryId id : filter(store, one)) merged.insert(id);
    }
    relevant.assign(merged.begin(), merged.end());
    if (!relevant.empty()) {
      builder.warn(WarningKind::MultiSeedFallback, request.seeds.front(),
                   "no query contains all seeds; using the union of per-seed queries");
    }
  }
  if (relevant.empty()) {
    throw NoRelevantQueries("no query in the workload contains " + toNTriples(request.seeds.front()) +
                            (request.seeds.size() > 1 ? " or the other seeds" : ""));
  }
  return relevant;
}

std::size_t frequencyWithin(const WorkloadStore& store, const Term& t,
                            std::span<const QueryId> relevant) {
  const Term one[] = {t};
  return filter(store, one, relevant).size();
}

void summarizeGreedy(const WorkloadStore& store, const SummaryRequest& request,
                     std::span<const QueryId> relevant, std::vector<NodeWeight> top,
                     SummaryBuilder& builder, Execution execution) {
  BlankNodeAllocator blanks;
  std::vector<Term> visited{request.seeds.front()};
  auto attach = [&](const Term& x) {
    if (auto path = link(store, relevant, x, visited, execution)) {
      builder.addResolution(resolveVariables(*path, store, blanks));
    } else {
      builder.warn(WarningKind::IsolatedNode, x, "no relevant query links it to the summary");
    }
    visited.push_back(x);
  };
  for (std::size_t i = 1; i < request.seeds.size(); ++i) attach(request.seeds[i]);
  for (auto& node : top) {
    attach(node.term);
    builder.addNode(std::move(node));
  }
}

void summarizeRandom(const WorkloadStore& store, const SummaryRequest& request,
                     std::span<const QueryId> relevant, std::size_t budget,
                     SummaryBuilder& builder) {
  std::set<Term> seeds(request.seeds.begin(), request.seeds.end());
  std::set<Term> poolSet;
  for (QueryId id : relevant) {
    for (const auto& node : store.graph(id).nodes) {
      if (node.isConcrete() && !seeds.count(node)) poolSet.insert(node);
    }
  }
  std::vector<Term> pool(poolSet.begin(), poolSet.end());
  Rng rng(request.randomSeed);
  const std::size_t picked = std::min(budget, pool.size());
  sampleToFront(std::span<Term>(pool), picked, rng);
  pool.resize(picked);

  std::vector<NodeWeight> chosen;
  for (auto& t : pool) chosen.push_back({t, frequencyWithin(store, t, relevant)});
  std::stable_sort(chosen.begin(), chosen.end(), [](const NodeWeight& a, const NodeWeight& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.term < b.term;
  });

  BlankNodeAllocator blanks;
  for (auto& node : chosen) {
    std::vector<const QueryEdge*> incident;
    for (QueryId id : relevant) {
      for (const auto& e : store.graph(id).edges) {
        if (e.predicate.isConcrete() && e.a != e.b && (e.a == node.term || e.b == node.term))
          incident.push_back(&e);
      }
    }
    if (!incident.empty()) {
      const QueryEdge& e = *incident[rng.below(incident.size())];
      builder.addResolution(resolveTriples({{e.a, e.predicate, e.b}}, store, blanks));
    }
    builder.addNode(std::move(node));
  }
}

}  // namespace

Summary summarize(const WorkloadStore& store, const SummaryRequest& request,
                  Execution execution) {
  validate(store, request);
  Summary summary;
  SummaryBuilder builder(summary);
  const std::vector<QueryId> relevant = relevantQueries(store, request, builder);

  for (const auto& s : request.seeds) builder.addNode({s, frequencyWithin(store, s, relevant)});

  const std::size_t budget = request.k - request.seeds.size();
  std::size_t selected = 0;
  if (request.strategy == Strategy::ISummary) {
    auto top = selectTopNodes(store, relevant, budget, request.seeds);
    selected = top.size();
    summarizeGreedy(store, request, relevant, std::move(top), builder, execution);
  } else {
    summarizeRandom(store, request, relevant, budget, builder);
    selected = summary.nodes.size() - request.seeds.size();
  }
  if (selected < budget) {
    builder.warn(WarningKind::BudgetShortfall, request.seeds.front(),
                 "requested " + std::to_string(budget) + " nodes besides the seeds, found " +
                     std::to_string(selected));
  }
  builder.flagIntermediates();
  return summary;
}

}  // namespace isummary
