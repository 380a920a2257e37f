#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "isummary/coverage.hpp"
#include "isummary/errors.hpp"
#include "isummary/parallel.hpp"
#include "isummary/report.hpp"
#include "isummary/sparql.hpp"
#include "isummary/steiner.hpp"
#include "isummary/summarizer.hpp"
#include "isummary/synth.hpp"
#include "isummary/workload.hpp"

namespace {

namespace fs = std::filesystem;
using namespace isummary;

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

// Thrown when the oracle finds an instance outside the factor-2 bound.
class BoundViolation : public Error {
 public:
  explicit BoundViolation(const std::string& msg) : Error("BoundViolation", msg) {}
};

struct LogFlags {
  std::string path;
  std::string format = "raw-lines";
  std::optional<std::size_t> tsvColumn;
  std::string basePrefix;

  void attach(CLI::App* cmd) {
    cmd->add_option("--log", path, "Query log path (file or directory)")->required();
    cmd->add_option("--format", format, "raw-lines | urlencoded-lines | rq-directory | tsv")
        ->capture_default_str();
    cmd->add_option("--tsv-column", tsvColumn, "Zero-based column holding the query (tsv)");
    cmd->add_option("--base-prefix", basePrefix, "IRI prefix applied to bare names");
  }

  WorkloadStore load() const {
    LoadOptions options;
    options.format = parseLogFormat(format);
    options.tsvColumn = tsvColumn;
    options.parse.basePrefix = basePrefix;
    WorkloadStore store = loadWorkload(path, options);
    spdlog::info("loaded {} queries ({} rejected) from {}", store.size(), store.rejectedCount(),
                 path);
    return store;
  }
};

// Opens `path` for writing; "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct SummarizeCommand {
  LogFlags log;
  std::vector<std::string> seeds;
  std::size_t k = 0;
  std::string strategy = "isummary";
  std::uint64_t rng = 0;
  std::string out = "-";
  std::string report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("summarize", "Build a personalized summary around seed nodes");
    log.attach(cmd);
    cmd->add_option("--seed", seeds, "Seed term; repeat for several seeds")->required();
    cmd->add_option("--k", k, "Summary size in nodes, seeds included")->required();
    cmd->add_option("--strategy", strategy, "isummary | random")->capture_default_str();
    cmd->add_option("--rng", rng, "Random strategy seed")->capture_default_str();
    cmd->add_option("--out", out, "N-Triples output, - for stdout")->capture_default_str();
    cmd->add_option("--report", report, "JSON report path");
    cmd->callback([this] { run(); });
  }

  void run() const {
    SummaryRequest request;
    ParseOptions parse{log.basePrefix};
    for (const auto& s : seeds) request.seeds.push_back(parseTerm(s, parse));
    request.k = k;
    request.strategy = parseStrategy(strategy);
    request.randomSeed = rng;
    WorkloadStore store = log.load();
    Summary summary = summarize(store, request, Execution::Parallel);
    for (const auto& w : summary.warnings) {
      spdlog::warn("{} {} {}", warningKindName(w.kind),
                   w.term.lexical.empty() ? "" : toNTriples(w.term), w.detail);
    }
    Output nt(out);
    writeNTriples(nt.stream(), summary);
    if (!report.empty()) {
      Output json(report);
      json.stream() << summaryReport(summary, request).dump(2) << '\n';
    }
  }
};

struct EvaluateCommand {
  LogFlags log;
  std::vector<std::size_t> kValues{5, 10, 15};
  std::vector<std::string> strategies{"isummary", "random"};
  CoverageConfig config;
  std::string out = "-";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("evaluate", "Cross-validated coverage of summary strategies");
    log.attach(cmd);
    cmd->add_option("--k", kValues, "Comma-separated summary sizes")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--strategies", strategies, "Comma-separated strategies")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--folds", config.folds)->capture_default_str();
    cmd->add_option("--split", config.splitRatio, "Training fraction")->capture_default_str();
    cmd->add_option("--sample-seeds", config.sampleSeeds)->capture_default_str();
    cmd->add_option("--rng", config.rngSeed)->capture_default_str();
    cmd->add_option("--w-node", config.wNode)->capture_default_str();
    cmd->add_option("--w-edge", config.wEdge)->capture_default_str();
    cmd->add_option("--out", out, "CSV output, - for stdout")->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    if (kValues.empty()) throw InvalidRequest("--k needs at least one value");
    config.validate();
    std::vector<Strategy> parsed;
    for (const auto& s : strategies) parsed.push_back(parseStrategy(s));
    WorkloadStore store = log.load();
    EvaluationTable table = evaluate(store, config, kValues, parsed, Execution::Parallel);
    for (const auto& w : table.warnings) spdlog::warn("{} {}", warningKindName(w.kind), w.detail);
    Output csv(out);
    writeEvaluationCsv(csv.stream(), table);
    for (const auto& cell : table.aggregates) {
      std::fprintf(stderr, "k=%zu %-8s rows=%zu mean=%.4f sd=%.4f\n", cell.k,
                   std::string(strategyName(cell.strategy)).c_str(), cell.rows, cell.stats.mean,
                   cell.stats.stddev);
    }
  }
};

struct OracleCommand {
  std::string instances;
  std::size_t trials = 200;
  std::uint64_t rng = 7;
  std::size_t maxNodes = 12;
  std::size_t maxK = 6;
  double edgeProbability = 0.35;
  std::string out = "-";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle", "Check CHINS against exhaustive search");
    cmd->add_option("--instances", instances, "Directory of instance files (*.txt)");
    cmd->add_option("--trials", trials, "Random instances to generate")->capture_default_str();
    cmd->add_option("--rng", rng)->capture_default_str();
    cmd->add_option("--max-nodes", maxNodes)->capture_default_str();
    cmd->add_option("--max-k", maxK)->capture_default_str();
    cmd->add_option("--edge-prob", edgeProbability)->capture_default_str();
    cmd->add_option("--out", out, "CSV output, - for stdout")->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::pair<std::string, steiner::SteinerInstance>> work;
    if (!instances.empty()) {
      if (!fs::is_directory(instances)) throw IoError(instances + " is not a directory");
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(instances)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
          files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw IoError("cannot read " + f.string());
        work.emplace_back(f.filename().string(), steiner::readInstance(in));
      }
    }
    Rng gen(rng);
    for (std::size_t t = 0; t < trials; ++t) {
      work.emplace_back("random-" + std::to_string(t),
                        steiner::randomInstance(gen, 2, maxNodes, maxK, edgeProbability));
    }

    Output csv(out);
    auto& os = csv.stream();
    os << "instance,n,m,lambda,k,status,exact_weight,exact_cost,chins_cost,ratio\n";
    std::size_t feasible = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    char buf[160];
    for (const auto& [name, inst] : work) {
      const auto check = steiner::checkApproximation(inst);
      const char* status = !check.feasible ? "infeasible" : check.withinBound ? "ok" : "violation";
      if (check.feasible) {
        ++feasible;
        worst = std::max(worst, check.ratio);
        if (!check.withinBound) ++violations;
      }
      std::snprintf(buf, sizeof buf, "%s,%.9f,%.9f,%.9f,%.6f\n", status, check.exactWeight,
                    check.exactCost, check.chinsCost, check.ratio);
      os << name << ',' << inst.graph.nodeCount << ',' << inst.graph.edges.size() << ','
         << inst.terminals.size() << ',' << inst.k << ',' << buf;
    }
    std::fprintf(stderr, "instances=%zu feasible=%zu violations=%zu worst_ratio=%.6f\n",
                 work.size(), feasible, violations, worst);
    if (violations > 0) {
      throw BoundViolation(std::to_string(violations) + " instance(s) exceed twice the optimum");
    }
  }
};

struct SynthCommand {
  SyntheticSpec spec;
  std::string out = "-";

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic raw-lines query log");
    cmd->add_option("--n-queries", spec.nQueries)->capture_default_str();
    cmd->add_option("--classes", spec.classes)->capture_default_str();
    cmd->add_option("--predicates", spec.predicates)->capture_default_str();
    cmd->add_option("--instances", spec.instances)->capture_default_str();
    cmd->add_option("--skew", spec.skew, "Zipf exponent")->capture_default_str();
    cmd->add_option("--mean-patterns", spec.meanPatterns)->capture_default_str();
    cmd->add_option("--max-patterns", spec.maxPatterns)->capture_default_str();
    cmd->add_option("--rng", spec.rngSeed)->capture_default_str();
    cmd->add_option("--out", out, "Output path, - for stdout")->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    spec.validate();
    Output file(out);
    writeSyntheticWorkload(spec, file.stream());
  }
};

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::default_logger()->clone("isummary"));
  spdlog::set_pattern("[%l] %v");
  if (const char* level = std::getenv("ISUMMARY_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
  applyThreadLimitFromEnvironment();

  CLI::App app{"Workload-based personalized knowledge graph summaries"};
  app.require_subcommand(1);
  SummarizeCommand summarizeCmd;
  EvaluateCommand evaluateCmd;
  OracleCommand oracleCmd;
  SynthCommand synthCmd;
  summarizeCmd.attach(app);
  evaluateCmd.attach(app);
  oracleCmd.attach(app);
  synthCmd.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const InvalidRequest& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
