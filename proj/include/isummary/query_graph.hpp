#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "isummary/sparql.hpp"
#include "isummary/term.hpp"

namespace isummary {

/// An edge as written in the query: `a --predicate--> b`.
struct QueryEdge {
  Term a;
  Term predicate;
  Term b;

  bool operator==(const QueryEdge&) const = default;
  std::strong_ordering operator<=>(const QueryEdge&) const = default;
};

/// Undirected labeled multigraph of one query after type-collapse.
struct QueryGraph {
  std::vector<Term> nodes;  // sorted, unique
  std::vector<QueryEdge> edges;
  std::uint32_t sourceQueryId = 0;

  bool hasNode(const Term& t) const;
};

/// Builds the type-collapsed graph of a query.
///
/// A variable with type patterns `(?v rdf:type C)` (C a concrete IRI) is
/// relabeled by its least class everywhere; that pattern is absorbed, any
/// further type patterns of `?v` remain as ordinary edges. Every other pattern
/// becomes one edge between its subject and object.
QueryGraph buildGraph(const ParsedQuery& query);

std::vector<Term> concreteNodes(const QueryGraph& graph);
std::vector<Triple> concreteEdges(const QueryGraph& graph);

enum class Direction : unsigned char { Forward, Backward };

struct PathStep {
  Term predicate;
  Direction direction = Direction::Forward;
  Term waypoint;  // node reached by this step; the last one is `to`

  bool operator==(const PathStep&) const = default;
  std::strong_ordering operator<=>(const PathStep&) const = default;
};

/// A path between two concrete terms in canonical form: `from <= to`, steps
/// read from `from`, variable waypoints renamed `v0, v1, ...` by position.
struct PathSignature {
  Term from;
  Term to;
  std::vector<PathStep> steps;

  std::size_t length() const { return steps.size(); }
  bool operator==(const PathSignature&) const = default;
  std::strong_ordering operator<=>(const PathSignature&) const = default;
};

/// Canonicalizes a concrete walk `start -step0-> ... -> end` given with the
/// real waypoint terms. Reverses it when `end < start` and renames variables.
PathSignature canonicalSignature(const Term& start, const std::vector<PathStep>& steps);

/// The triples a signature denotes, oriented by each step's direction.
std::vector<Triple> signatureTriples(const PathSignature& path);

/// Minimum-hop path between two distinct concrete nodes, ignoring edges whose
/// predicate is a variable. Among equally short paths the least signature is
/// returned. `nullopt` when either node is missing or they are disconnected.
std::optional<PathSignature> shortestPath(const QueryGraph& graph, const Term& x, const Term& y);

}  // namespace isummary
