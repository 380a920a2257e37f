#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "isummary/parallel.hpp"
#include "isummary/query_graph.hpp"
#include "isummary/sparql.hpp"

namespace isummary {

using QueryId = std::uint32_t;
using TermIndex = std::unordered_map<Term, std::vector<QueryId>, TermHash>;

/// Immutable query log. Query ids equal positions; every query's
/// type-collapsed graph is built once at construction.
class WorkloadStore {
 public:
  WorkloadStore() = default;
  /// Renumbers `queries` by position.
  WorkloadStore(std::vector<ParsedQuery> queries, std::size_t rejectedCount,
                std::vector<std::uint64_t> rejectedLines = {},
                Execution execution = Execution::Parallel);

  std::size_t size() const { return queries_.size(); }
  bool empty() const { return queries_.empty(); }
  const std::vector<ParsedQuery>& queries() const { return queries_; }
  const ParsedQuery& query(QueryId id) const { return queries_.at(id); }
  const QueryGraph& graph(QueryId id) const { return graphs_.at(id); }
  std::size_t rejectedCount() const { return rejectedCount_; }
  const std::vector<std::uint64_t>& rejectedLines() const { return rejectedLines_; }
  const TermIndex& termIndex() const { return termIndex_; }

  /// Ascending ids of the queries mentioning `term` in any pattern position.
  std::span<const QueryId> postings(const Term& term) const;

  /// A new store holding the given queries, renumbered in the given order.
  WorkloadStore subset(std::span<const QueryId> ids) const;

  std::vector<QueryId> allIds() const;

 private:
  std::vector<ParsedQuery> queries_;
  std::vector<QueryGraph> graphs_;
  TermIndex termIndex_;
  std::size_t rejectedCount_ = 0;
  std::vector<std::uint64_t> rejectedLines_;
};

/// Ids of the queries containing every term (any position), ascending.
/// An empty term set matches every query.
std::vector<QueryId> filter(const WorkloadStore& store, std::span<const Term> terms);

/// Same, restricted to the ascending id list `within`.
std::vector<QueryId> filter(const WorkloadStore& store, std::span<const Term> terms,
                            std::span<const QueryId> within);

enum class LogFormat { RawLines, UrlEncodedLines, RqDirectory, Tsv };

LogFormat parseLogFormat(std::string_view name);

struct LoadOptions {
  LogFormat format = LogFormat::RawLines;
  std::optional<std::size_t> tsvColumn;
  ParseOptions parse;
  std::size_t batchSize = 4096;
  Execution execution = Execution::Parallel;
};

/// Streams a query log from disk. Records are parsed in batches; unparsable
/// records are counted and logged with their line number. Throws IoError,
/// EmptyWorkload, or InvalidRequest for a tsvColumn/format mismatch.
WorkloadStore loadWorkload(const std::filesystem::path& path, const LoadOptions& options);

struct LogRecord {
  std::string text;
  std::uint64_t line = 0;
};

struct RecordParse {
  std::optional<ParsedQuery> query;
  std::string error;
};

/// Parses a batch of records, one result per record in input order.
std::vector<RecordParse> parseRecords(std::span<const LogRecord> records,
                                      const ParseOptions& options, Execution execution);

/// `%XX` decoding with `+` as space. Malformed escapes are kept verbatim.
std::string percentDecode(std::string_view text);

}  // namespace isummary
