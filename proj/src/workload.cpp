#include "isummary/workload.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace isummary {

namespace {

void indexQuery(TermIndex& index, const ParsedQuery& q) {
  auto add = [&](const Term& t) {
    if (t.isVariable()) return;
    auto& ids = index[t];
    if (ids.empty() || ids.back() != q.id) ids.push_back(q.id);
  };
  for (const auto& p : q.patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
}

TermIndex buildIndex(const std::vector<ParsedQuery>& queries) {
  TermIndex index;
  for (const auto& q : queries) indexQuery(index, q);
  return index;
}

std::vector<QueryGraph> buildGraphs(const std::vector<ParsedQuery>& queries,
                                    Execution execution) {
  std::vector<QueryGraph> graphs(queries.size());
  const auto n = static_cast<std::int64_t>(queries.size());
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static) num_threads(threadCount())
    for (std::int64_t i = 0; i < n; ++i) graphs[i] = buildGraph(queries[i]);
  } else {
    for (std::int64_t i = 0; i < n; ++i) graphs[i] = buildGraph(queries[i]);
  }
  return graphs;
}

std::vector<QueryId> intersect(std::span<const QueryId> a, std::span<const QueryId> b) {
  std::vector<QueryId> out;
  out.reserve(std::min(a.size(), b.size()));
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string trimLine(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool isBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

WorkloadStore::WorkloadStore(std::vector<ParsedQuery> queries, std::size_t rejectedCount,
                             std::vector<std::uint64_t> rejectedLines, Execution execution)
    : queries_(std::move(queries)),
      rejectedCount_(rejectedCount),
      rejectedLines_(std::move(rejectedLines)) {
  for (std::size_t i = 0; i < queries_.size(); ++i) queries_[i].id = static_cast<QueryId>(i);
  graphs_ = buildGraphs(queries_, execution);
  termIndex_ = buildIndex(queries_);
}

std::span<const QueryId> WorkloadStore::postings(const Term& term) const {
  if (auto it = termIndex_.find(term); it != termIndex_.end()) return it->second;
  return {};
}

WorkloadStore WorkloadStore::subset(std::span<const QueryId> ids) const {
  WorkloadStore out;
  out.queries_.reserve(ids.size());
  out.graphs_.reserve(ids.size());
  for (QueryId id : ids) {
    out.queries_.push_back(queries_.at(id));
    out.queries_.back().id = static_cast<QueryId>(out.queries_.size() - 1);
    out.graphs_.push_back(graphs_.at(id));
    out.graphs_.back().sourceQueryId = out.queries_.back().id;
  }
  out.termIndex_ = buildIndex(out.queries_);
  return out;
}

std::vector<QueryId> WorkloadStore::allIds() const {
  std::vector<QueryId> ids(queries_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<QueryId>(i);
  return ids;
}

std::vector<QueryId> filter(const WorkloadStore& store, std::span<const Term> terms) {
  if (terms.empty()) return store.allIds();
  std::vector<std::span<const QueryId>> lists;
  lists.reserve(terms.size());
  for (const auto& t : terms) lists.push_back(store.postings(t));
  std::sort(lists.begin(), lists.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<QueryId> result(lists.front().begin(), lists.front().end());
  for (std::size_t i = 1; i < lists.size() && !result.empty(); ++i)
    result = intersect(result, lists[i]);
  return result;
}

std::vector<QueryId> filter(const WorkloadStore& store, std::span<const Term> terms,
                            std::span<const QueryId> within) {
  if (terms.empty()) return {within.begin(), within.end()};
  return intersect(filter(store, terms), within);
}

LogFormat parseLogFormat(std::string_view name) {
  if (name == "raw-lines") return LogFormat::RawLines;
  if (name == "urlencoded-lines") return LogFormat::UrlEncodedLines;
  if (name == "rq-directory") return LogFormat::RqDirectory;
  if (name == "tsv") return LogFormat::Tsv;
  throw InvalidRequest("unknown log format '" + std::string(name) + "'");
}

std::string percentDecode(std::string_view text) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < text.size() && hex(text[i + 1]) >= 0 &&
               hex(text[i + 2]) >= 0) {
      out += static_cast<char>(hex(text[i + 1]) * 16 + hex(text[i + 2]));
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

std::vector<RecordParse> parseRecords(std::span<const LogRecord> records,
                                      const ParseOptions& options, Execution execution) {
  std::vector<RecordParse> out(records.size());
  auto parseOne = [&](std::size_t i) {
    try {
      out[i].query = parseQuery(records[i].text, options);
      out[i].query->sourceLine = records[i].line;
    } catch (const ParseError& e) {
      out[i].error = e.what();
    }
  };
  const auto n = static_cast<std::int64_t>(records.size());
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64) num_threads(threadCount())
    for (std::int64_t i = 0; i < n; ++i) parseOne(static_cast<std::size_t>(i));
  } else {
    for (std::int64_t i = 0; i < n; ++i) parseOne(static_cast<std::size_t>(i));
  }
  return out;
}

namespace {

/// Accumulates parsed batches in input order.
class WorkloadBuilder {
 public:
  WorkloadBuilder(const LoadOptions& options, std::string source)
      : options_(options), source_(std::move(source)) {}

  void add(LogRecord record) {
    pending_.push_back(std::move(record));
    if (pending_.size() >= std::max<std::size_t>(options_.batchSize, 1)) flush();
  }

  // The first record of a TSV file is a header when it does not parse.
  void markFirstAsHeaderCandidate() { headerCandidate_ = true; }

  WorkloadStore finish() {
    flush();
    if (queries_.empty()) {
      throw EmptyWorkload("no parsable queries in " + source_ + " (" +
                          std::to_string(rejected_.size()) + " rejected)");
    }
    spdlog::debug("loaded {} queries from {} ({} rejected)", queries_.size(), source_,
                 rejected_.size());
    std::size_t rejectedCount = rejected_.size();
    return WorkloadStore(std::move(queries_), rejectedCount, std::move(rejected_),
                         options_.execution);
  }

 private:
  const LoadOptions& options_;
  std::string source_;
  std::vector<LogRecord> pending_;
  std::vector<ParsedQuery> queries_;
  std::vector<std::uint64_t> rejected_;
  bool headerCandidate_ = false;

  void flush() {
    if (pending_.empty()) return;
    auto results = parseRecords(pending_, options_.parse, options_.execution);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].query) {
        queries_.push_back(std::move(*results[i].query));
      } else if (headerCandidate_ && i == 0) {
        spdlog::debug("{}: skipping header row", source_);
      } else {
        spdlog::debug("{}:{}: rejected query: {}", source_, pending_[i].line, results[i].error);
        rejected_.push_back(pending_[i].line);
      }
    }
    headerCandidate_ = false;
    pending_.clear();
  }
};

std::ifstream openFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

WorkloadStore loadWorkload(const std::filesystem::path& path, const LoadOptions& options) {
  if (options.tsvColumn.has_value() != (options.format == LogFormat::Tsv)) {
    throw InvalidRequest("a TSV column is required for, and only for, the tsv format");
  }
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw IoError("no such path: " + path.string());

  WorkloadBuilder builder(options, path.string());

  if (options.format == LogFormat::RqDirectory) {
    if (!std::filesystem::is_directory(path)) throw IoError(path.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".rq")
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    std::uint64_t index = 0;
    for (const auto& file : files) {
      std::ifstream in = openFile(file);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      builder.add({std::move(text), ++index});
    }
    return builder.finish();
  }

  std::ifstream in = openFile(path);
  if (options.format == LogFormat::Tsv) builder.markFirstAsHeaderCandidate();
  std::string line;
  std::uint64_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = trimLine(std::move(line));
    if (isBlank(line)) continue;
    switch (options.format) {
      case LogFormat::RawLines:
        builder.add({std::move(line), lineNo});
        break;
      case LogFormat::UrlEncodedLines:
        builder.add({percentDecode(line), lineNo});
        break;
      case LogFormat::Tsv: {
        std::size_t column = *options.tsvColumn;
        std::size_t start = 0;
        for (std::size_t c = 0; c < column && start != std::string::npos; ++c) {
          start = line.find('\t', start);
          if (start != std::string::npos) ++start;
        }
        std::string field;
        if (start != std::string::npos) {
          std::size_t end = line.find('\t', start);
          field = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
        }
        builder.add({std::move(field), lineNo});
        break;
      }
      case LogFormat::RqDirectory:
        break;
    }
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return builder.finish();
}

}  // namespace isummary
