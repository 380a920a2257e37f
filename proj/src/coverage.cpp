#include "isummary/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_set>

#include "isummary/errors.hpp"
#include "isummary/rng.hpp"

namespace isummary {

void CoverageConfig::validate() const {
  auto unit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!unit(wNode) || !unit(wEdge) || std::abs(wNode + wEdge - 1.0) > 1e-9)
    throw InvalidRequest("coverage weights must lie in [0,1] and sum to 1");
  if (!(splitRatio > 0.0 && splitRatio < 1.0))
    throw InvalidRequest("split ratio must lie strictly between 0 and 1");
  if (folds < 1) throw InvalidRequest("at least one fold is required");
}

namespace {

bool endpointMatches(const Term& queryTerm, const Term& summaryTerm) {
  return queryTerm.isVariable() || queryTerm == summaryTerm;
}

double meanOf(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

FoldStats foldStatistics(std::vector<double> foldMeans, double overall) {
  FoldStats stats;
  stats.mean = overall;
  if (foldMeans.size() > 1) {
    double m = meanOf(foldMeans);
    double ss = 0;
    for (double v : foldMeans) ss += (v - m) * (v - m);
    stats.stddev = std::sqrt(ss / static_cast<double>(foldMeans.size() - 1));
  }
  stats.foldMeans = std::move(foldMeans);
  return stats;
}

}  // namespace

CoverageReport coverage(const Summary& summary, const WorkloadStore& testStore,
                        std::span<const Term> seeds, const CoverageConfig& config) {
  std::unordered_set<Term, TermHash> present;
  for (const auto& n : summary.nodes) present.insert(n.term);
  for (const auto& t : summary.triples) {
    present.insert(t.subject);
    present.insert(t.object);
  }

  CoverageReport report;
  for (QueryId id : filter(testStore, seeds)) {
    const QueryGraph& g = testStore.graph(id);
    std::size_t nodes = 0;
    std::size_t hitNodes = 0;
    for (const auto& node : g.nodes) {
      if (!node.isConcrete()) continue;
      ++nodes;
      if (present.count(node)) ++hitNodes;
    }
    std::size_t hitEdges = 0;
    for (const auto& e : g.edges) {
      bool covered = std::any_of(summary.triples.begin(), summary.triples.end(), [&](const Triple& t) {
        return endpointMatches(e.predicate, t.predicate) && endpointMatches(e.a, t.subject) &&
               endpointMatches(e.b, t.object);
      });
      if (covered) ++hitEdges;
    }
    QueryCoverage qc;
    qc.queryId = id;
    qc.nodeFraction = nodes == 0 ? 0.0 : static_cast<double>(hitNodes) / static_cast<double>(nodes);
    qc.edgeFraction = g.edges.empty()
                          ? 0.0
                          : static_cast<double>(hitEdges) / static_cast<double>(g.edges.size());
    qc.combined = config.wNode * qc.nodeFraction + config.wEdge * qc.edgeFraction;
    report.perQuery.push_back(qc);
  }

  report.n = report.perQuery.size();
  if (report.n == 0) {
    report.warnings.push_back({WarningKind::NoMatchingTestQueries,
                               seeds.empty() ? Term{} : seeds.front(),
                               "no test query contains the seeds"});
    return report;
  }
  double sumCombined = 0, sumNodes = 0, sumEdges = 0;
  for (const auto& q : report.perQuery) {
    sumCombined += q.combined;
    sumNodes += q.nodeFraction;
    sumEdges += q.edgeFraction;
  }
  const double n = static_cast<double>(report.n);
  report.mean = sumCombined / n;
  report.meanNodeFraction = sumNodes / n;
  report.meanEdgeFraction = sumEdges / n;
  return report;
}

FoldSplit splitFold(std::size_t n, double ratio, std::uint64_t seed) {
  std::vector<QueryId> ids(n);
  std::iota(ids.begin(), ids.end(), QueryId{0});
  Rng rng(seed);
  shuffle(std::span<QueryId>(ids), rng);
  const auto trainCount = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  FoldSplit split;
  split.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(trainCount));
  split.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(trainCount), ids.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<Term> sampleSeedTerms(const WorkloadStore& train, const WorkloadStore& test,
                                  std::size_t count, Rng& rng) {
  auto concreteNodeSet = [](const WorkloadStore& store) {
    std::set<Term> out;
    for (QueryId id = 0; id < store.size(); ++id) {
      for (const auto& node : store.graph(id).nodes) {
        if (node.isConcrete()) out.insert(node);
      }
    }
    return out;
  };
  std::set<Term> inTrain = concreteNodeSet(train);
  std::set<Term> inTest = concreteNodeSet(test);
  std::vector<Term> pool;
  std::set_intersection(inTrain.begin(), inTrain.end(), inTest.begin(), inTest.end(),
                        std::back_inserter(pool));
  const std::size_t picked = std::min(count, pool.size());
  sampleToFront(std::span<Term>(pool), picked, rng);
  pool.resize(picked);
  return pool;
}

namespace {

struct Cell {
  std::size_t seedIndex;
  std::size_t k;
  Strategy strategy;
};

EvaluationRow runCell(const WorkloadStore& train, const WorkloadStore& test,
                      const CoverageConfig& config, std::size_t fold, const Term& seed,
                      const Cell& cell) {
  SummaryRequest request;
  request.seeds = {seed};
  request.k = cell.k;
  request.strategy = cell.strategy;
  request.randomSeed = deriveSeed(config.rngSeed, {fold, cell.seedIndex, cell.k});
  Summary summary = summarize(train, request);
  CoverageReport report = coverage(summary, test, request.seeds, config);

  EvaluationRow row;
  row.fold = fold;
  row.seedIndex = cell.seedIndex;
  row.seed = seed;
  row.k = cell.k;
  row.strategy = cell.strategy;
  row.n = report.n;
  row.nodeCoverage = report.meanNodeFraction;
  row.edgeCoverage = report.meanEdgeFraction;
  row.coverage = report.mean;
  return row;
}

}  // namespace

EvaluationTable evaluate(const WorkloadStore& store, const CoverageConfig& config,
                         std::span<const std::size_t> kValues,
                         std::span<const Strategy> strategies, Execution execution) {
  config.validate();
  if (kValues.empty()) throw InvalidRequest("at least one k value is required");
  if (strategies.empty()) throw InvalidRequest("at least one strategy is required");
  for (std::size_t k : kValues) {
    if (k < 1) throw InvalidRequest("k values must be at least 1");
  }

  EvaluationTable table;
  for (std::size_t fold = 0; fold < config.folds; ++fold) {
    FoldSplit split = splitFold(store.size(), config.splitRatio, config.rngSeed + fold);
    if (split.train.empty() || split.test.empty()) {
      throw InsufficientWorkload("fold " + std::to_string(fold) + " has an empty " +
                                 (split.train.empty() ? "train" : "test") + " part (" +
                                 std::to_string(store.size()) + " queries)");
    }
    const WorkloadStore train = store.subset(split.train);
    const WorkloadStore test = store.subset(split.test);

    Rng seedRng(deriveSeed(config.rngSeed, {fold, 0x5eed}));
    std::vector<Term> seeds = sampleSeedTerms(train, test, config.sampleSeeds, seedRng);
    if (seeds.size() < config.sampleSeeds) {
      table.warnings.push_back(
          {WarningKind::SeedSamplingShortfall, Term{},
           "fold " + std::to_string(fold) + ": only " + std::to_string(seeds.size()) +
               " eligible seed terms"});
    }

    std::vector<Cell> cells;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      for (std::size_t k : kValues) {
        for (Strategy strategy : strategies) cells.push_back({s, k, strategy});
      }
    }
    std::vector<EvaluationRow> rows(cells.size());
    const auto n = static_cast<std::int64_t>(cells.size());
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCount())
      for (std::int64_t i = 0; i < n; ++i)
        rows[i] = runCell(train, test, config, fold, seeds[cells[i].seedIndex], cells[i]);
    } else {
      for (std::int64_t i = 0; i < n; ++i)
        rows[i] = runCell(train, test, config, fold, seeds[cells[i].seedIndex], cells[i]);
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }

  std::sort(table.rows.begin(), table.rows.end(), [](const EvaluationRow& a, const EvaluationRow& b) {
    return std::tie(a.fold, a.seedIndex, a.k, a.strategy) <
           std::tie(b.fold, b.seedIndex, b.k, b.strategy);
  });

  for (std::size_t k : kValues) {
    for (Strategy strategy : strategies) {
      std::vector<std::vector<double>> perFold(config.folds);
      std::vector<double> all;
      for (const auto& row : table.rows) {
        if (row.k != k || row.strategy != strategy) continue;
        perFold[row.fold].push_back(row.coverage);
        all.push_back(row.coverage);
      }
      std::vector<double> foldMeans;
      for (const auto& values : perFold) {
        if (!values.empty()) foldMeans.push_back(meanOf(values));
      }
      CellAggregate aggregate;
      aggregate.k = k;
      aggregate.strategy = strategy;
      aggregate.rows = all.size();
      aggregate.stats = foldStatistics(std::move(foldMeans), meanOf(all));
      table.aggregates.push_back(std::move(aggregate));
    }
  }
  return table;
}

namespace {

std::string csvField(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void writeEvaluationCsv(std::ostream& out, const EvaluationTable& table) {
  out << "fold,seed,k,strategy,n,node_cov,edge_cov,coverage\n";
  for (const auto& row : table.rows) {
    out << row.fold << ',' << csvField(toNTriples(row.seed)) << ',' << row.k << ','
        << strategyName(row.strategy) << ',' << row.n << ',' << fixed6(row.nodeCoverage) << ','
        << fixed6(row.edgeCoverage) << ',' << fixed6(row.coverage) << '\n';
  }
}

}  // namespace isummary
