#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isummary/parallel.hpp"
#include "isummary/query_graph.hpp"
#include "isummary/workload.hpp"

namespace isummary {

enum class Strategy { ISummary, Random };

Strategy parseStrategy(std::string_view name);
std::string_view strategyName(Strategy strategy);

struct SummaryRequest {
  std::vector<Term> seeds;  // lambda = seeds.size()
  std::size_t k = 0;
  Strategy strategy = Strategy::ISummary;
  std::uint64_t randomSeed = 0;
};

enum class WarningKind {
  IsolatedNode,
  UnresolvedVariable,
  ResolvedVariable,
  IntermediateNode,
  BudgetShortfall,
  MultiSeedFallback,
  NoMatchingTestQueries,
  SeedSamplingShortfall,
};

std::string_view warningKindName(WarningKind kind);

struct Warning {
  WarningKind kind;
  Term term;
  std::string detail;

  bool operator==(const Warning&) const = default;
};

struct NodeWeight {
  Term term;
  std::size_t frequency = 0;

  bool operator==(const NodeWeight&) const = default;
};

/// A personalized summary: seeds first, then the selected nodes in selection
/// order, and the triples linking them.
struct Summary {
  std::vector<Triple> triples;
  std::vector<NodeWeight> nodes;
  std::vector<Warning> warnings;

  bool hasWarning(WarningKind kind) const;
  std::size_t totalFrequency() const;
};

/// Top `count` concrete graph nodes of the relevant queries by document
/// frequency, ties broken by term order. May return fewer.
std::vector<NodeWeight> selectTopNodes(const WorkloadStore& store,
                                       std::span<const QueryId> relevant, std::size_t count,
                                       std::span<const Term> exclude);

/// Most frequent shortest path from `x` to any visited node over the
/// relevant queries containing both. Frequencies accumulate across all
/// visited partners; ties go to the shorter, then the lesser signature.
std::optional<PathSignature> link(const WorkloadStore& store, std::span<const QueryId> relevant,
                                  const Term& x, std::span<const Term> visited,
                                  Execution execution = Execution::Serial);

/// Hands out `_:u0`, `_:u1`, ... for variables that cannot be resolved.
class BlankNodeAllocator {
 public:
  Term next() { return Term::blank("u" + std::to_string(counter_++)); }

 private:
  std::size_t counter_ = 0;
};

struct Resolution {
  std::vector<Triple> triples;
  std::vector<Warning> warnings;
};

/// Turns the path into triples and replaces each variable by the concrete term
/// seen most often (in distinct queries of the whole store) in the same
/// predicate/side positions; a fresh blank node when there is none.
Resolution resolveVariables(const PathSignature& path, const WorkloadStore& store,
                            BlankNodeAllocator& blanks);

/// Variable resolution over arbitrary triples.
Resolution resolveTriples(std::vector<Triple> triples, const WorkloadStore& store,
                          BlankNodeAllocator& blanks);

/// Builds a k-node summary around the seeds. Throws InvalidRequest or
/// NoRelevantQueries.
Summary summarize(const WorkloadStore& store, const SummaryRequest& request,
                  Execution execution = Execution::Serial);

}  // namespace isummary
