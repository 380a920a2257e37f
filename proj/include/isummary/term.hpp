#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace isummary {

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

// Declaration order is the canonical kind order used by every lexicographic
// tie-break in the library.
enum class TermKind : unsigned char { Iri, Literal, Blank, Variable };

/// An RDF term or a query variable.
///
/// `lexical` holds the IRI without angle brackets, the literal's lexical form,
/// the blank node label without `_:`, or the variable name without `?`.
/// `datatypeOrLang` is only used by literals: `@tag` for a language tag,
/// otherwise the datatype IRI.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;
  std::string datatypeOrLang;

  static Term iri(std::string value) { return {TermKind::Iri, std::move(value), {}}; }
  static Term literal(std::string value, std::string annotation = {}) {
    return {TermKind::Literal, std::move(value), std::move(annotation)};
  }
  static Term blank(std::string label) { return {TermKind::Blank, std::move(label), {}}; }
  static Term variable(std::string name) {
    return {TermKind::Variable, std::move(name), {}};
  }

  bool isVariable() const { return kind == TermKind::Variable; }
  bool isConcrete() const { return kind != TermKind::Variable; }
  bool isIri() const { return kind == TermKind::Iri; }
  bool isLiteral() const { return kind == TermKind::Literal; }

  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term&) const = default;
};

/// Checks the structural invariants of a term (non-empty IRIs without
/// whitespace, well-formed variable names).
bool isWellFormed(const Term& term);

/// N-Triples / SPARQL surface form: `<iri>`, `"lex"@en`, `"5"^^<dt>`,
/// `_:b0`, `?x`.
std::string toNTriples(const Term& term);

std::string escapeLiteral(std::string_view text);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.lexical);
    h ^= std::hash<std::string>{}(t.datatypeOrLang) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
    return h ^ (static_cast<std::size_t>(t.kind) * 0x100000001b3ULL);
  }
};

struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;

  bool operator==(const TriplePattern&) const = default;
  std::strong_ordering operator<=>(const TriplePattern&) const = default;
};

/// Subject is never a literal; predicate is an IRI or a variable.
bool isValidPattern(const TriplePattern& pattern);

using Triple = TriplePattern;

}  // namespace isummary
