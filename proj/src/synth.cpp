#include "isummary/synth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "isummary/errors.hpp"

namespace isummary {

void SyntheticSpec::validate() const {
  if (nQueries < 1 || classes < 1 || predicates < 1 || instances < 1 || maxPatterns < 1)
    throw InvalidRequest("synthetic workload counts must be at least 1");
  if (!(skew >= 0.0)) throw InvalidRequest("skew exponent must be non-negative");
  if (!(meanPatterns >= 1.0) || meanPatterns > static_cast<double>(maxPatterns))
    throw InvalidRequest("mean pattern count must lie in [1, maxPatterns]");
}

ZipfSampler::ZipfSampler(std::size_t n, double skew) : cdf_(n) {
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), skew);
    cdf_[r] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::size_t ZipfSampler::operator()(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                           static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

namespace {

struct Vocabulary {
  ZipfSampler classes;
  ZipfSampler predicates;
  ZipfSampler instances;
  ZipfSampler literals;
  ZipfSampler offsets;

  explicit Vocabulary(const SyntheticSpec& spec)
      : classes(spec.classes, spec.skew),
        predicates(std::min<std::size_t>(spec.predicates, 64), spec.skew),
        instances(std::min<std::size_t>(spec.instances, 2048), spec.skew),
        literals(64, spec.skew),
        offsets(std::min<std::size_t>(spec.classes, 32), spec.skew) {}
};

std::size_t patternCount(const SyntheticSpec& spec, Rng& rng) {
  // 1 + Geometric(p) has mean 1/p.
  const double p = 1.0 / spec.meanPatterns;
  std::size_t count = 1;
  while (count < spec.maxPatterns && rng.uniform() >= p) ++count;
  return count;
}

std::string makeQuery(const SyntheticSpec& spec, const Vocabulary& vocab, Rng& rng) {
  const std::size_t length = patternCount(spec, rng);
  struct Var {
    std::size_t cls;
  };
  std::vector<Var> vars;
  std::vector<std::string> patterns;

  const std::size_t anchor = vocab.classes(rng);
  vars.push_back({anchor});
  patterns.push_back("?v0 a ex:C" + std::to_string(anchor));

  while (patterns.size() < length) {
    const std::size_t from = static_cast<std::size_t>(rng.below(vars.size()));
    const std::size_t cls = vars[from].cls;
    const std::size_t pred = (cls * 7 + vocab.predicates(rng)) % spec.predicates;
    const std::string subject = "?v" + std::to_string(from);
    const std::string verb = " ex:p" + std::to_string(pred) + " ";
    const double r = rng.uniform();
    if (r < 0.45 && patterns.size() + 1 < length) {
      const std::size_t target = (cls + 1 + vocab.offsets(rng)) % spec.classes;
      const std::string v = "?v" + std::to_string(vars.size());
      vars.push_back({target});
      patterns.push_back(subject + verb + v);
      patterns.push_back(v + " a ex:C" + std::to_string(target));
    } else if (r < 0.55) {
      const std::string v = "?v" + std::to_string(vars.size());
      vars.push_back({cls});
      patterns.push_back(subject + verb + v);
    } else if (r < 0.85) {
      const std::size_t inst = (cls * 131 + vocab.instances(rng)) % spec.instances;
      patterns.push_back(subject + verb + "ex:i" + std::to_string(inst));
    } else {
      patterns.push_back(subject + verb + "\"value " + std::to_string(vocab.literals(rng)) + "\"");
    }
  }

  std::string query = "PREFIX ex: <" + spec.iriBase + "> ";
  query += rng.below(2) == 0 ? "SELECT * WHERE {" : "SELECT DISTINCT ?v0 WHERE {";
  for (const auto& p : patterns) query += " " + p + " .";
  query += " }";
  return query;
}

}  // namespace

std::vector<std::string> generateSyntheticQueries(const SyntheticSpec& spec) {
  spec.validate();
  Vocabulary vocab(spec);
  Rng rng(spec.rngSeed);
  std::vector<std::string> out;
  out.reserve(spec.nQueries);
  for (std::size_t i = 0; i < spec.nQueries; ++i) out.push_back(makeQuery(spec, vocab, rng));
  return out;
}

void writeSyntheticWorkload(const SyntheticSpec& spec, std::ostream& out) {
  for (const auto& q : generateSyntheticQueries(spec)) out << q << '\n';
}

}  // namespace isummary
