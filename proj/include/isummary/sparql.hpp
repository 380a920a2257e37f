#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "isummary/errors.hpp"
#include "isummary/term.hpp"

namespace isummary {

struct ParseOptions {
  /// Prepended to bare identifiers such as `Person`. Empty keeps them verbatim.
  std::string basePrefix;
};

/// One workload query: its basic graph pattern plus where it came from.
struct ParsedQuery {
  std::uint32_t id = 0;
  std::vector<TriplePattern> patterns;
  std::string raw;
  std::uint64_t sourceLine = 0;
};

/// Parses the SELECT/BGP subset of SPARQL.
///
/// PREFIX declarations are expanded, `a` becomes rdf:type, OPTIONAL, UNION and
/// GRAPH blocks are flattened into the pattern list, FILTER/BIND/MINUS/VALUES
/// are skipped. Property paths, subqueries, SERVICE and non-SELECT forms throw
/// ParseError, as does a query whose BGP ends up empty.
ParsedQuery parseQuery(std::string_view text, const ParseOptions& options = {});

/// Parses a single term (`<iri>`, `prefix:local`, bare name, `"literal"`,
/// `_:b`) as it would appear in object position.
Term parseTerm(std::string_view text, const ParseOptions& options = {});

/// `SELECT * WHERE { s p o . ... }` with every term in its full surface form.
/// Re-parsing the result yields the same pattern list.
std::string toCanonicalText(const std::vector<TriplePattern>& patterns);

}  // namespace isummary
