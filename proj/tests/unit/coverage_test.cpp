#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "coverage_oracle.hpp"
#include "isummary/coverage.hpp"
#include "isummary/errors.hpp"
#include "isummary/synth.hpp"
#include "test_support.hpp"

using namespace isummary;
using testing_support::exampleStore;
using testing_support::iri;
using testing_support::storeFrom;

namespace {

const Triple kT1{iri("Organization"), iri("affiliatedOf"), iri("Person")};

Summary summaryOf(std::vector<Triple> triples, std::vector<Term> nodes) {
  Summary s;
  s.triples = std::move(triples);
  for (auto& n : nodes) s.nodes.push_back({std::move(n), 0});
  return s;
}

const char* const kQ1 = "SELECT ?x ?y WHERE {?x a Person. ?y a Professor. ?x advisor ?y.}";
const char* const kQ2 = "SELECT ?x ?y WHERE {?x a Person. ?y a Organization. ?y affiliatedOf ?x.}";

WorkloadStore synthetic(std::size_t n, std::uint64_t seed, std::size_t classes = 40) {
  SyntheticSpec spec;
  spec.nQueries = n;
  spec.classes = classes;
  spec.predicates = 60;
  spec.instances = 200;
  spec.rngSeed = seed;
  std::vector<ParsedQuery> qs;
  for (const auto& t : generateSyntheticQueries(spec)) qs.push_back(parseQuery(t));
  return WorkloadStore(std::move(qs), 0);
}

}  // namespace

TEST(Coverage, HandEvaluatedExamples) {
  const Term seeds[] = {iri("Person")};
  Summary s = summaryOf({kT1}, {iri("Person"), iri("Organization")});
  CoverageConfig cfg;
  CoverageReport full = coverage(s, storeFrom({kQ2}), seeds, cfg);
  ASSERT_EQ(full.n, 1u);
  EXPECT_DOUBLE_EQ(full.perQuery[0].nodeFraction, 1.0);
  EXPECT_DOUBLE_EQ(full.perQuery[0].edgeFraction, 1.0);
  EXPECT_DOUBLE_EQ(full.mean, 1.0);

  CoverageReport partial = coverage(s, storeFrom({kQ1}), seeds, cfg);
  EXPECT_DOUBLE_EQ(partial.perQuery[0].nodeFraction, 0.5);
  EXPECT_DOUBLE_EQ(partial.perQuery[0].edgeFraction, 0.0);
  EXPECT_DOUBLE_EQ(partial.mean, 0.25);

  CoverageReport both = coverage(s, storeFrom({kQ1, kQ2}), seeds, cfg);
  EXPECT_DOUBLE_EQ(both.mean, 0.625);
}

TEST(Coverage, WeightsShiftTheBalance) {
  const Term seeds[] = {iri("Person")};
  Summary s = summaryOf({kT1}, {iri("Person"), iri("Organization")});
  CoverageConfig nodesOnly;
  nodesOnly.wNode = 1.0;
  nodesOnly.wEdge = 0.0;
  EXPECT_DOUBLE_EQ(coverage(s, storeFrom({kQ1}), seeds, nodesOnly).mean, 0.5);
  CoverageConfig bad;
  bad.wNode = 0.7;
  EXPECT_THROW(bad.validate(), InvalidRequest);
}

TEST(Coverage, NoMatchingQueries) {
  const Term seeds[] = {iri("Publication")};
  Summary s = summaryOf({kT1}, {iri("Publication")});
  CoverageReport r = coverage(s, storeFrom({kQ1}), seeds, {});
  EXPECT_EQ(r.n, 0u);
  EXPECT_DOUBLE_EQ(r.mean, 0.0);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].kind, WarningKind::NoMatchingTestQueries);
}

TEST(Coverage, VariablesMatchAnything) {
  const Term seeds[] = {iri("A")};
  WorkloadStore test = storeFrom({"SELECT * WHERE {<A> ?p ?o . ?s <q> <A>}"});
  Summary s = summaryOf({{iri("A"), iri("r"), iri("Z")}}, {iri("A")});
  CoverageReport r = coverage(s, test, seeds, {});
  EXPECT_DOUBLE_EQ(r.perQuery[0].nodeFraction, 1.0);
  EXPECT_DOUBLE_EQ(r.perQuery[0].edgeFraction, 0.5);
}

TEST(Coverage, WholeQueryAsSummaryScoresOne) {
  WorkloadStore store = synthetic(300, 21);
  for (QueryId id = 0; id < store.size(); ++id) {
    const QueryGraph& g = store.graph(id);
    if (g.edges.empty()) continue;
    Summary s = summaryOf(concreteEdges(g), concreteNodes(g));
    const Term seed[] = {concreteNodes(g).front()};
    const QueryId one[] = {id};
    CoverageReport r = coverage(s, store.subset(one), seed, {});
    ASSERT_EQ(r.n, 1u);
    EXPECT_DOUBLE_EQ(r.mean, 1.0) << toCanonicalText(store.query(id).patterns);
  }
}

TEST(Coverage, AddingTriplesNeverHurts) {
  WorkloadStore store = synthetic(800, 22);
  const Term seed[] = {iri("http://example.org/synth/C0")};
  std::vector<Triple> pool;
  for (QueryId id : filter(store, seed)) {
    for (const auto& t : concreteEdges(store.graph(id))) pool.push_back(t);
  }
  ASSERT_GT(pool.size(), 20u);
  Summary s = summaryOf({}, {seed[0]});
  double last = coverage(s, store, seed, {}).mean;
  for (std::size_t i = 0; i < 40 && i < pool.size(); ++i) {
    s.triples.push_back(pool[(i * 37) % pool.size()]);
    double now = coverage(s, store, seed, {}).mean;
    EXPECT_GE(now, last);
    last = now;
  }
}

TEST(Coverage, DuplicatingTheTestLogKeepsTheMean) {
  WorkloadStore store = synthetic(400, 23);
  std::vector<QueryId> twice;
  for (QueryId id = 0; id < store.size(); ++id) {
    twice.push_back(id);
    twice.push_back(id);
  }
  WorkloadStore doubled = store.subset(twice);
  const Term seed[] = {iri("http://example.org/synth/C1")};
  Summary s = summarize(store, {{seed[0]}, 6, Strategy::ISummary, 0});
  CoverageReport a = coverage(s, store, seed, {});
  CoverageReport b = coverage(s, doubled, seed, {});
  EXPECT_EQ(b.n, 2 * a.n);
  EXPECT_NEAR(a.mean, b.mean, 1e-12);
}

// Randomized stores of at most 20 queries scored by the library and by the
// brute-force evaluator.
TEST(Coverage, MatchesBruteForce) {
  Rng rng(31337);
  for (int trial = 0; trial < 100; ++trial) {
    SyntheticSpec spec;
    spec.nQueries = 1 + rng.below(20);
    spec.classes = 4;
    spec.predicates = 5;
    spec.instances = 6;
    spec.meanPatterns = 2.5;
    spec.rngSeed = rng();
    std::vector<ParsedQuery> qs;
    for (const auto& t : generateSyntheticQueries(spec)) qs.push_back(parseQuery(t));
    WorkloadStore test(qs, 0);

    std::vector<Term> nodes;
    for (QueryId id = 0; id < test.size(); ++id) {
      for (const auto& n : concreteNodes(test.graph(id))) nodes.push_back(n);
    }
    const Term seed = nodes[rng.below(nodes.size())];
    std::vector<Triple> triples;
    std::vector<Term> summaryNodes{seed};
    const std::size_t count = rng.below(6);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& g = test.graph(static_cast<QueryId>(rng.below(test.size())));
      if (!g.edges.empty()) {
        const auto& e = g.edges[rng.below(g.edges.size())];
        triples.push_back({e.a, e.predicate, e.b});
      }
      summaryNodes.push_back(nodes[rng.below(nodes.size())]);
    }
    CoverageConfig cfg;
    cfg.wNode = static_cast<double>(rng.below(11)) / 10.0;
    cfg.wEdge = 1.0 - cfg.wNode;

    Summary s = summaryOf(triples, summaryNodes);
    const Term seeds[] = {seed};
    CoverageReport got = coverage(s, test, seeds, cfg);
    std::vector<std::vector<TriplePattern>> raw;
    for (const auto& q : qs) raw.push_back(q.patterns);
    oracle::BruteCoverage want =
        oracle::bruteCoverage(raw, triples, summaryNodes, {seed}, cfg.wNode, cfg.wEdge);
    ASSERT_EQ(got.n, want.n);
    EXPECT_NEAR(got.mean, want.mean, 1e-9);
    for (std::size_t i = 0; i < got.n; ++i)
      EXPECT_NEAR(got.perQuery[i].combined, want.perQuery[i], 1e-9);
  }
}

TEST(SplitFold, SizesAndDisjointness) {
  FoldSplit s = splitFold(10, 0.8, 42);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.test.size(), 2u);
  std::set<QueryId> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 10u);
  EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
  EXPECT_EQ(splitFold(7, 0.8, 1).train.size(), 5u);
  FoldSplit again = splitFold(10, 0.8, 42);
  EXPECT_EQ(again.test, s.test);
  EXPECT_NE(splitFold(1000, 0.8, 43).test, splitFold(1000, 0.8, 42).test);
}

TEST(Evaluate, RowCountAndOrder) {
  WorkloadStore store = synthetic(3000, 40);
  CoverageConfig cfg;
  const std::size_t ks[] = {5, 10, 15};
  const Strategy strategies[] = {Strategy::ISummary, Strategy::Random};
  EvaluationTable table = evaluate(store, cfg, ks, strategies);
  EXPECT_TRUE(table.warnings.empty());
  EXPECT_EQ(table.rows.size(), 600u);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    EXPECT_LE(std::tie(a.fold, a.seedIndex, a.k, a.strategy),
              std::tie(b.fold, b.seedIndex, b.k, b.strategy));
  }
  ASSERT_EQ(table.aggregates.size(), 6u);
  for (const auto& cell : table.aggregates) {
    EXPECT_EQ(cell.rows, 100u);
    EXPECT_EQ(cell.stats.foldMeans.size(), 10u);
  }
  for (const auto& row : table.rows) EXPECT_GT(row.n, 0u);
}

TEST(Evaluate, SerialParallelAndRepeatRunsAreByteIdentical) {
  WorkloadStore store = synthetic(1500, 41);
  CoverageConfig cfg;
  cfg.folds = 3;
  cfg.sampleSeeds = 4;
  const std::size_t ks[] = {3, 6};
  const Strategy strategies[] = {Strategy::ISummary, Strategy::Random};
  auto csv = [&](Execution e) {
    std::ostringstream out;
    writeEvaluationCsv(out, evaluate(store, cfg, ks, strategies, e));
    return out.str();
  };
  const std::string serial = csv(Execution::Serial);
  EXPECT_EQ(serial, csv(Execution::Parallel));
  EXPECT_EQ(serial, csv(Execution::Parallel));
  EXPECT_EQ(serial.substr(0, serial.find('\n')), "fold,seed,k,strategy,n,node_cov,edge_cov,coverage");
  EXPECT_EQ(std::count(serial.begin(), serial.end(), '\n'), 1 + 3 * 4 * 2 * 2);
}

TEST(Evaluate, SeedShortfallIsWarned) {
  WorkloadStore store = exampleStore();
  CoverageConfig cfg;
  cfg.folds = 2;
  cfg.splitRatio = 0.6;
  const std::size_t ks[] = {2};
  const Strategy strategies[] = {Strategy::ISummary};
  EvaluationTable t = evaluate(store, cfg, ks, strategies);
  EXPECT_FALSE(t.warnings.empty());
  EXPECT_LT(t.rows.size(), 20u);
}

TEST(Evaluate, EmptySideIsAnError) {
  WorkloadStore store = storeFrom({"SELECT * WHERE {?x a <A>}"});
  const std::size_t ks[] = {2};
  const Strategy strategies[] = {Strategy::ISummary};
  EXPECT_THROW(evaluate(store, {}, ks, strategies), InsufficientWorkload);
}

TEST(Evaluate, CsvQuotesSeedsWhenNeeded) {
  EvaluationTable t;
  EvaluationRow row;
  row.seed = Term::literal("a,b");
  row.k = 5;
  t.rows.push_back(row);
  std::ostringstream out;
  writeEvaluationCsv(out, t);
  EXPECT_NE(out.str().find("0,\"\"\"a,b\"\"\",5,isummary,0,0.000000,0.000000,0.000000"),
            std::string::npos)
      << out.str();
}
