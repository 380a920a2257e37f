#include "isummary/report.hpp"

#include <ostream>

namespace isummary {

void writeNTriples(std::ostream& out, const Summary& summary) {
  for (const auto& t : summary.triples) {
    out << toNTriples(t.subject) << ' ' << toNTriples(t.predicate) << ' ' << toNTriples(t.object)
        << " .\n";
  }
}

nlohmann::ordered_json summaryReport(const Summary& summary, const SummaryRequest& request) {
  using json = nlohmann::ordered_json;
  json report;
  json seeds = json::array();
  for (const auto& s : request.seeds) seeds.push_back(toNTriples(s));
  report["seeds"] = std::move(seeds);
  report["k"] = request.k;
  report["strategy"] = std::string(strategyName(request.strategy));

  json nodes = json::array();
  for (const auto& n : summary.nodes) {
    json node;
    node["term"] = toNTriples(n.term);
    node["frequency"] = n.frequency;
    nodes.push_back(std::move(node));
  }
  report["nodes"] = std::move(nodes);

  json triples = json::array();
  for (const auto& t : summary.triples) {
    triples.push_back(json::array({toNTriples(t.subject), toNTriples(t.predicate), toNTriples(t.object)}));
  }
  report["triples"] = std::move(triples);

  json warnings = json::array();
  for (const auto& w : summary.warnings) {
    json entry;
    entry["kind"] = std::string(warningKindName(w.kind));
    entry["term"] = w.term.lexical.empty() ? "" : toNTriples(w.term);
    entry["detail"] = w.detail;
    warnings.push_back(std::move(entry));
  }
  report["warnings"] = std::move(warnings);
  return report;
}

}  // namespace isummary
