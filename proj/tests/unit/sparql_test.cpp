#include <gtest/gtest.h>

#include "isummary/errors.hpp"
#include "isummary/sparql.hpp"
#include "isummary/synth.hpp"
#include "test_support.hpp"

using namespace isummary;
using testing_support::iri;
using testing_support::rdfType;
using testing_support::var;

namespace {

std::size_t count(std::string_view text) { return parseQuery(text).patterns.size(); }

std::size_t rejectOffset(std::string_view text) {
  try {
    parseQuery(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  ADD_FAILURE() << "accepted: " << text;
  return 0;
}

}  // namespace

TEST(Sparql, AdvisorQuery) {
  auto q = parseQuery("SELECT ?x ?y WHERE {?x a Person. ?y a Professor. ?x advisor ?y.}");
  ASSERT_EQ(q.patterns.size(), 3u);
  EXPECT_EQ(q.patterns[0], (TriplePattern{var("x"), rdfType(), iri("Person")}));
  EXPECT_EQ(q.patterns[2], (TriplePattern{var("x"), iri("advisor"), var("y")}));
}

TEST(Sparql, SingleTypePattern) {
  auto q = parseQuery("SELECT ?y WHERE {?y a Organization.}");
  ASSERT_EQ(q.patterns.size(), 1u);
  EXPECT_EQ(q.patterns[0].predicate, rdfType());
  EXPECT_EQ(q.patterns[0].object, iri("Organization"));
}

TEST(Sparql, PropertyPathsRejected) {
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x <p>+ ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x <p>/<q> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x ^<p> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x <p>|<q> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x <p>* ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x !<p> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x (<p>) ?y}"), ParseError);
  EXPECT_THROW(parseQuery("SELECT ?x WHERE {?x <p>? ?y}"), ParseError);
}

TEST(Sparql, ErrorOffsetsPointAtTheOffendingToken) {
  EXPECT_EQ(rejectOffset("SELECT ?x WHERE {?x <p>+ ?y}"), 23u);
  EXPECT_EQ(rejectOffset("ASK {?x <p> ?y}"), 0u);
  EXPECT_EQ(rejectOffset("SELECT ?x WHERE {\"lit\" <p> ?y}"), 17u);
  EXPECT_EQ(rejectOffset("SELECT ?x WHERE { }"), 16u);
}

TEST(Sparql, UnsupportedForms) {
  EXPECT_THROW(parseQuery("ASK {?x <p> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("CONSTRUCT {?x <p> ?y} WHERE {?x <p> ?y}"), ParseError);
  EXPECT_THROW(parseQuery("DESCRIBE <x>"), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { { SELECT ?x WHERE {?x <p> ?y} } }"), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { SERVICE <e> {?x <p> ?y} }"), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { ?x <p> [ <q> ?y ] }"), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { ?x <p> (1 2) }"), ParseError);
  EXPECT_THROW(parseQuery("not sparql"), ParseError);
  EXPECT_THROW(parseQuery(""), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { ?x <p> \"open }"), ParseError);
  EXPECT_THROW(parseQuery("SELECT * WHERE { ?x <p> ?y "), ParseError);
}

TEST(Sparql, PrefixesAndBuiltins) {
  auto q = parseQuery(
      "PREFIX ex: <http://e/> SELECT * WHERE { ?x ex:knows ex:bob . ?x rdfs:label \"b\" }");
  ASSERT_EQ(q.patterns.size(), 2u);
  EXPECT_EQ(q.patterns[0].predicate, iri("http://e/knows"));
  EXPECT_EQ(q.patterns[0].object, iri("http://e/bob"));
  EXPECT_EQ(q.patterns[1].predicate, iri("http://www.w3.org/2000/01/rdf-schema#label"));
  // undeclared prefixes stay verbatim
  auto u = parseQuery("SELECT * WHERE { ?x dbo:birthPlace ?y }");
  EXPECT_EQ(u.patterns[0].predicate, iri("dbo:birthPlace"));
}

TEST(Sparql, LiteralsAndNumbers) {
  auto q = parseQuery(
      "SELECT * WHERE { ?x <p> \"a\"@en . ?x <q> \"5\"^^xsd:integer . ?x <r> 7 . ?x <s> 2.5 . "
      "?x <t> true . ?x <u> '''multi\nline''' . ?x <v> \"esc\\\"aped\\u00e9\" }");
  ASSERT_EQ(q.patterns.size(), 7u);
  EXPECT_EQ(q.patterns[0].object, Term::literal("a", "@en"));
  EXPECT_EQ(q.patterns[1].object, Term::literal("5", std::string(kXsd) + "integer"));
  EXPECT_EQ(q.patterns[2].object, Term::literal("7", std::string(kXsd) + "integer"));
  EXPECT_EQ(q.patterns[3].object, Term::literal("2.5", std::string(kXsd) + "decimal"));
  EXPECT_EQ(q.patterns[4].object, Term::literal("true", std::string(kXsd) + "boolean"));
  EXPECT_EQ(q.patterns[5].object, Term::literal("multi\nline"));
  EXPECT_EQ(q.patterns[6].object, Term::literal("esc\"aped\xc3\xa9"));
}

TEST(Sparql, PredicateAndObjectLists) {
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y , ?z ; <q> ?w ; a <C> . }"), 4u);
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y ; }"), 1u);
}

TEST(Sparql, FlatteningAndSkipping) {
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y OPTIONAL { ?y <q> ?z } }"), 2u);
  EXPECT_EQ(count("SELECT * WHERE { { ?x <p> ?y } UNION { ?x <q> ?y } UNION { ?x <r> ?y } }"), 3u);
  EXPECT_EQ(count("SELECT * WHERE { GRAPH <g> { ?x <p> ?y } }"), 1u);
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y FILTER (?y > 3 && regex(str(?y), \"}\")) }"), 1u);
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y FILTER NOT EXISTS { ?y <q> ?z } }"), 1u);
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y MINUS { ?y <q> ?z } }"), 1u);
  EXPECT_EQ(count("SELECT * WHERE { ?x <p> ?y BIND(1 AS ?k) VALUES ?y { <a> <b> } }"), 1u);
  EXPECT_EQ(count("SELECT DISTINCT ?x WHERE { ?x <p> ?y } ORDER BY ?x LIMIT 10 OFFSET 5"), 1u);
  EXPECT_EQ(count("select ?x where { ?x a <C> }"), 1u);
  EXPECT_EQ(count("SELECT ?x FROM <g> WHERE { ?x a <C> }"), 1u);
  EXPECT_EQ(count("SELECT (COUNT(?x) AS ?n) WHERE { ?x a <C> } GROUP BY ?x"), 1u);
}

TEST(Sparql, AnonymousBlankAndLabels) {
  auto q = parseQuery("SELECT * WHERE { [] <p> _:b1 }");
  ASSERT_EQ(q.patterns.size(), 1u);
  EXPECT_EQ(q.patterns[0].subject.kind, TermKind::Blank);
  EXPECT_EQ(q.patterns[0].object, Term::blank("b1"));
}

TEST(Sparql, BasePrefixAppliesToBareNames) {
  ParseOptions opts{"http://ex/"};
  auto q = parseQuery("SELECT ?x WHERE {?x a Person. ?x advisor <http://abs/y>}", opts);
  EXPECT_EQ(q.patterns[0].object, iri("http://ex/Person"));
  EXPECT_EQ(q.patterns[0].predicate, rdfType());
  EXPECT_EQ(q.patterns[1].predicate, iri("http://ex/advisor"));
  EXPECT_EQ(q.patterns[1].object, iri("http://abs/y"));
  EXPECT_EQ(parseTerm("Person", opts), iri("http://ex/Person"));
}

TEST(Sparql, ParseTermForms) {
  EXPECT_EQ(parseTerm("<http://x>"), iri("http://x"));
  EXPECT_EQ(parseTerm("Person"), iri("Person"));
  EXPECT_EQ(parseTerm("\"FORTH\""), Term::literal("FORTH"));
  EXPECT_EQ(parseTerm("_:b"), Term::blank("b"));
  EXPECT_EQ(parseTerm("rdf:type"), rdfType());
  EXPECT_THROW(parseTerm("<a> <b>"), ParseError);
}

TEST(Sparql, CanonicalTextRoundTrip) {
  const char* texts[] = {
      "SELECT ?x ?y WHERE {?x a Person. ?y a Organization. ?y affiliatedOf ?x. ?y orgName \"FORTH\".}",
      "PREFIX ex: <http://e/> SELECT * WHERE { ?x ex:p \"l\\\"q\\n\"@en ; ex:q 5 . [] ex:r _:z }",
      "SELECT * WHERE { ?x <p> \"tab\\there\"^^<http://dt> OPTIONAL { ?x ?pp ?o } }",
  };
  for (const char* t : texts) {
    auto q = parseQuery(t);
    auto again = parseQuery(toCanonicalText(q.patterns));
    EXPECT_EQ(again.patterns, q.patterns) << t;
  }
}

TEST(Sparql, CanonicalTextRoundTripOnGeneratedQueries) {
  SyntheticSpec spec;
  spec.nQueries = 500;
  spec.meanPatterns = 4.0;
  spec.rngSeed = 77;
  for (const auto& text : generateSyntheticQueries(spec)) {
    auto q = parseQuery(text);
    EXPECT_EQ(parseQuery(toCanonicalText(q.patterns)).patterns, q.patterns) << text;
  }
}
