#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "isummary/parallel.hpp"
#include "isummary/rng.hpp"
#include "isummary/summarizer.hpp"
#include "isummary/workload.hpp"

namespace isummary {

struct CoverageConfig {
  double wNode = 0.5;
  double wEdge = 0.5;
  double splitRatio = 0.8;
  std::size_t folds = 10;
  std::size_t sampleSeeds = 10;
  std::uint64_t rngSeed = 42;

  /// Throws InvalidRequest unless weights lie in [0,1] and sum to 1, the split
  /// ratio lies in (0,1), and folds >= 1.
  void validate() const;
};

struct QueryCoverage {
  QueryId queryId = 0;
  double nodeFraction = 0;
  double edgeFraction = 0;
  double combined = 0;
};

struct FoldStats {
  std::vector<double> foldMeans;
  double mean = 0;
  double stddev = 0;  // sample standard deviation of the fold means
};

struct CoverageReport {
  std::vector<QueryCoverage> perQuery;
  double mean = 0;
  double meanNodeFraction = 0;
  double meanEdgeFraction = 0;
  std::size_t n = 0;
  FoldStats foldStats;
  std::vector<Warning> warnings;
};

/// Weighted node/edge coverage of every test query containing all seeds.
///
/// Node denominators count the query graph's concrete nodes; edge
/// denominators count all its edges. A query edge is covered when some
/// summary triple has the same predicate and agrees with every concrete
/// endpoint (variables match anything). A zero denominator contributes 0.
CoverageReport coverage(const Summary& summary, const WorkloadStore& testStore,
                        std::span<const Term> seeds, const CoverageConfig& config);

struct FoldSplit {
  std::vector<QueryId> train;  // ascending
  std::vector<QueryId> test;   // ascending
};

/// Shuffles 0..n-1 with `Rng(seed)` and cuts at floor(ratio * n).
FoldSplit splitFold(std::size_t n, double ratio, std::uint64_t seed);

/// Uniform sample (without replacement) of concrete graph nodes occurring in
/// both stores, in sampling order.
std::vector<Term> sampleSeedTerms(const WorkloadStore& train, const WorkloadStore& test,
                                  std::size_t count, Rng& rng);

struct EvaluationRow {
  std::size_t fold = 0;
  std::size_t seedIndex = 0;
  Term seed;
  std::size_t k = 0;
  Strategy strategy = Strategy::ISummary;
  std::size_t n = 0;
  double nodeCoverage = 0;
  double edgeCoverage = 0;
  double coverage = 0;
};

struct CellAggregate {
  std::size_t k = 0;
  Strategy strategy = Strategy::ISummary;
  std::size_t rows = 0;
  FoldStats stats;
};

struct EvaluationTable {
  std::vector<EvaluationRow> rows;  // sorted by (fold, seedIndex, k, strategy)
  std::vector<CellAggregate> aggregates;
  std::vector<Warning> warnings;
};

/// Cross-validated comparison of strategies. Each fold shuffles with
/// `rngSeed + fold`, splits train/test, samples seeds, and scores every
/// (seed, k, strategy) cell. Throws InsufficientWorkload on an empty side.
EvaluationTable evaluate(const WorkloadStore& store, const CoverageConfig& config,
                         std::span<const std::size_t> kValues,
                         std::span<const Strategy> strategies,
                         Execution execution = Execution::Parallel);

/// `fold,seed,k,strategy,n,node_cov,edge_cov,coverage` with 6 decimals.
void writeEvaluationCsv(std::ostream& out, const EvaluationTable& table);

}  // namespace isummary
