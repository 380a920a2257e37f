#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "isummary/rng.hpp"

namespace isummary {

/// Parameters of a synthetic SPARQL workload.
struct SyntheticSpec {
  std::size_t nQueries = 50000;
  std::size_t classes = 400;
  std::size_t predicates = 1300;
  std::size_t instances = 100000;
  double meanPatterns = 3.0;
  std::size_t maxPatterns = 20;
  double skew = 1.0;  // Zipf exponent; 0 is uniform
  std::uint64_t rngSeed = 1;
  std::string iriBase = "http://example.org/synth/";

  /// Counts >= 1, skew >= 0, 1 <= meanPatterns <= maxPatterns.
  void validate() const;
};

/// Rank sampler for P(rank r) proportional to 1 / (r + 1)^skew.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double skew);
  std::size_t operator()(Rng& rng) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

/// One SELECT query per entry, all accepted by parseQuery.
///
/// Each query types an anchor variable with a Zipf-popular class and grows a
/// BGP from it: links to further typed variables, instance objects, and
/// literal objects, with predicates and neighbours correlated with the class
/// so popular combinations recur across queries. The pattern count follows a
/// geometric distribution with the given mean, truncated at maxPatterns.
std::vector<std::string> generateSyntheticQueries(const SyntheticSpec& spec);

/// Writes the queries as a raw-lines log.
void writeSyntheticWorkload(const SyntheticSpec& spec, std::ostream& out);

}  // namespace isummary
