#include <gtest/gtest.h>

#include <algorithm>

#include "isummary/query_graph.hpp"
#include "isummary/rng.hpp"
#include "path_oracle.hpp"
#include "test_support.hpp"

using namespace isummary;
using testing_support::iri;
using testing_support::rdfType;
using testing_support::var;

namespace {

QueryGraph graphOf(std::string_view text) { return buildGraph(parseQuery(text)); }

}  // namespace

TEST(QueryGraph, TypeCollapse) {
  QueryGraph g = graphOf(
      "SELECT ?x ?y WHERE {?x a Person. ?y a Organization. ?y affiliatedOf ?x. ?y orgName \"FORTH\".}");
  EXPECT_EQ(g.nodes, (std::vector<Term>{iri("Organization"), iri("Person"), Term::literal("FORTH")}));
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (QueryEdge{iri("Organization"), iri("affiliatedOf"), iri("Person")}));
  EXPECT_EQ(g.edges[1], (QueryEdge{iri("Organization"), iri("orgName"), Term::literal("FORTH")}));
}

TEST(QueryGraph, LoneTypePatternIsANode) {
  QueryGraph g = graphOf("SELECT ?y WHERE {?y a Organization.}");
  EXPECT_EQ(g.nodes, (std::vector<Term>{iri("Organization")}));
  EXPECT_TRUE(g.edges.empty());
}

TEST(QueryGraph, MultiTypedVariableKeepsLeastClass) {
  QueryGraph g = graphOf("SELECT * WHERE {?x a <Zed>. ?x a <Alpha>. ?x <p> ?y}");
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (QueryEdge{iri("Alpha"), rdfType(), iri("Zed")}));
  EXPECT_EQ(g.edges[1], (QueryEdge{iri("Alpha"), iri("p"), var("y")}));
  EXPECT_EQ(concreteNodes(g), (std::vector<Term>{iri("Alpha"), iri("Zed")}));
}

TEST(QueryGraph, UntypedVariablesStay) {
  QueryGraph g = graphOf("SELECT * WHERE {?x <p> ?y. <s> a <C>. ?x a \"lit\"}");
  EXPECT_TRUE(g.hasNode(var("x")));
  EXPECT_TRUE(g.hasNode(iri("s")));
  EXPECT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(concreteEdges(g).size(), 3u);
}

TEST(QueryGraph, SingleEdgePath) {
  QueryGraph g = graphOf(
      "SELECT ?x ?y WHERE {?x a Person. ?y a Organization. ?y affiliatedOf ?x. ?y orgName \"FORTH\".}");
  auto p = shortestPath(g, iri("Person"), iri("Organization"));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->length(), 1u);
  EXPECT_EQ(signatureTriples(*p),
            (std::vector<Triple>{{iri("Organization"), iri("affiliatedOf"), iri("Person")}}));
}

TEST(QueryGraph, TwoHopPathThroughVariable) {
  QueryGraph g = graphOf("SELECT * WHERE {?a a <A>. ?a <p> ?m. ?m <q> <B>}");
  auto p = shortestPath(g, iri("B"), iri("A"));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->from, iri("A"));
  EXPECT_EQ(p->to, iri("B"));
  ASSERT_EQ(p->length(), 2u);
  EXPECT_EQ(p->steps[0], (PathStep{iri("p"), Direction::Forward, var("v0")}));
  EXPECT_EQ(p->steps[1], (PathStep{iri("q"), Direction::Forward, iri("B")}));
}

TEST(QueryGraph, NoPathCases) {
  QueryGraph g = graphOf("SELECT * WHERE {?a a <A>. ?b a <B>. ?a ?p ?b. <C> <r> <C>}");
  EXPECT_FALSE(shortestPath(g, iri("A"), iri("B")));  // only a variable predicate joins them
  EXPECT_FALSE(shortestPath(g, iri("A"), iri("Missing")));
  EXPECT_FALSE(shortestPath(g, iri("A"), iri("A")));
  EXPECT_FALSE(shortestPath(g, iri("A"), iri("C")));
}

TEST(QueryGraph, TieBrokenByLeastSignature) {
  QueryGraph g = graphOf("SELECT * WHERE {<A> <z> <B>. <A> <m> <B>. <B> <k> <A>}");
  auto p = shortestPath(g, iri("A"), iri("B"));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->steps[0], (PathStep{iri("k"), Direction::Backward, iri("B")}));
}

TEST(QueryGraph, SignatureCanonicalization) {
  std::vector<PathStep> walk{{iri("p"), Direction::Forward, var("m")},
                             {iri("q"), Direction::Backward, iri("A")}};
  PathSignature sig = canonicalSignature(iri("Z"), walk);
  EXPECT_EQ(sig.from, iri("A"));
  EXPECT_EQ(sig.to, iri("Z"));
  EXPECT_EQ(sig.steps[0], (PathStep{iri("q"), Direction::Forward, var("v0")}));
  EXPECT_EQ(sig.steps[1], (PathStep{iri("p"), Direction::Backward, iri("Z")}));
  EXPECT_EQ(signatureTriples(sig),
            (std::vector<Triple>{{iri("A"), iri("q"), var("v0")}, {iri("Z"), iri("p"), var("v0")}}));
}

namespace {

// Random small query: up to 8 distinct nodes drawn from a few classes,
// instances and variables, joined by a handful of edges.
std::string randomQuery(Rng& rng) {
  const char* nodes[] = {"?a", "?b", "?c", "?d", "<I1>", "<I2>", "<I3>", "\"L\""};
  const char* preds[] = {"<p>", "<q>", "<r>", "?pv"};
  std::string body;
  const int types = static_cast<int>(rng.below(3));
  for (int i = 0; i < types; ++i) {
    body += std::string(nodes[rng.below(4)]) + " a <C" + std::to_string(rng.below(3)) + "> . ";
  }
  const int edges = 1 + static_cast<int>(rng.below(8));
  for (int i = 0; i < edges; ++i) {
    body += std::string(nodes[rng.below(7)]) + " " + preds[rng.below(4)] + " " +
            nodes[rng.below(8)] + " . ";
  }
  return "SELECT * WHERE { " + body + "}";
}

}  // namespace

// BFS with greedy least-signature choice against exhaustive simple-path
// enumeration on small random graphs.
TEST(QueryGraph, ShortestPathMatchesEnumeration) {
  Rng rng(2024);
  std::size_t compared = 0;
  std::size_t found = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    QueryGraph g = graphOf(randomQuery(rng));
    auto concrete = concreteNodes(g);
    for (const auto& x : concrete) {
      for (const auto& y : concrete) {
        auto fast = shortestPath(g, x, y);
        auto slow = oracle::shortestPathByEnumeration(g, x, y);
        ASSERT_EQ(fast.has_value(), slow.has_value());
        if (fast) {
          ASSERT_EQ(*fast, *slow);
          ++found;
        }
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 3000u);
  EXPECT_GT(found, 1000u);
}

TEST(QueryGraph, ShortestPathIsSymmetric) {
  Rng rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    QueryGraph g = graphOf(randomQuery(rng));
    auto concrete = concreteNodes(g);
    for (const auto& x : concrete) {
      for (const auto& y : concrete) EXPECT_EQ(shortestPath(g, x, y), shortestPath(g, y, x));
    }
  }
}

TEST(QueryGraph, InvariantUnderPatternOrder) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    ParsedQuery q = parseQuery(randomQuery(rng));
    QueryGraph g = buildGraph(q);
    ParsedQuery shuffled = q;
    shuffle(std::span<TriplePattern>(shuffled.patterns), rng);
    QueryGraph h = buildGraph(shuffled);
    EXPECT_EQ(g.nodes, h.nodes);
    auto ge = g.edges, he = h.edges;
    std::sort(ge.begin(), ge.end());
    std::sort(he.begin(), he.end());
    EXPECT_EQ(ge, he);
    for (const auto& x : concreteNodes(g)) {
      for (const auto& y : concreteNodes(g)) EXPECT_EQ(shortestPath(g, x, y), shortestPath(h, x, y));
    }
  }
}

TEST(QueryGraph, BuildIsIdempotentOnConcreteGraphs) {
  // a graph with no variables rebuilds to itself
  QueryGraph g = graphOf("SELECT * WHERE {<A> <p> <B>. <B> <q> \"x\"}");
  ParsedQuery q;
  for (const auto& t : concreteEdges(g)) q.patterns.push_back(t);
  QueryGraph h = buildGraph(q);
  EXPECT_EQ(g.nodes, h.nodes);
  EXPECT_EQ(g.edges, h.edges);
}
