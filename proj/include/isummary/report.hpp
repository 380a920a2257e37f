#pragma once

#include <iosfwd>

#include "json.hpp"

#include "isummary/summarizer.hpp"

namespace isummary {

/// One `<s> <p> <o> .` line per summary triple.
void writeNTriples(std::ostream& out, const Summary& summary);

/// `{seeds, k, strategy, nodes: [{term, frequency}], triples, warnings}` with
/// that key order; terms in N-Triples form.
nlohmann::ordered_json summaryReport(const Summary& summary, const SummaryRequest& request);

}  // namespace isummary
