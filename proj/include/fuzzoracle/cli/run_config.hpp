#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fuzzoracle/evaluation.hpp"
#include "fuzzoracle/io/json_codec.hpp"
#include "fuzzoracle/oracle.hpp"

namespace fuzzoracle::cli {

using io::Json;

enum class ProgramKind { Agent, PerfectStub };

/// Everything `test` needs. Precedence when assembling one:
/// command-line flag > --set override > config file > default.
struct RunConfig {
  EnvSpec env;
  AgentConfig agent;
  ProgramKind program = ProgramKind::Agent;
  std::optional<std::string> bug;
  OracleConfig oracle;
  std::string outDir = "fuzzoracle-out";
  bool emitTraces = false;
};

/// Reads a JSON document; parse failures carry the file name, line and column.
Json load_json_file(const std::string& path);

/// Applies `dotted.path=value`. The value is parsed as JSON when it can be,
/// otherwise taken as a string.
void apply_override(Json& doc, const std::string& assignment);

RunConfig decode_run_config(const Json& doc);
Json encode(const RunConfig& config);

/// Applies FUZZORACLE_WORKERS (a cap on the pool size) when set.
void apply_worker_env(OracleConfig& config);

std::unique_ptr<Program> make_program(const RunConfig& config);

/// Deterministic report: identical inputs give byte-identical output.
Json build_report(const RunConfig& config, const Verdict& verdict);
/// One record per policy: id, series and trend.
std::string build_series_jsonl(const Verdict& verdict);
std::string render_report_text(const RunConfig& config, const Verdict& verdict);

struct Variant {
  std::string name;
  std::optional<std::string> bug;
  Label groundTruth = Label::NonBuggy;
};

struct CorpusConfig {
  EnvSpec env;
  AgentConfig agent;
  OracleConfig oracle;
  std::vector<Variant> variants;  // defaults to clean + every registered bug
  std::vector<double> rocThresholds;
  std::string outDir = "fuzzoracle-eval";
};

CorpusConfig decode_corpus(const Json& doc);
std::vector<Variant> default_variants();

struct VariantResult {
  Variant variant;
  Label predicted = Label::Buggy;
  std::size_t trueCount = 0;
  std::size_t policyCount = 0;
};

struct EvaluationResult {
  std::vector<VariantResult> programs;
  ConfusionMatrix confusion;
  ConfusionMetrics metrics;
  std::vector<RocPoint> roc;
};

/// Checks every bug id before anything is trained.
void validate_variants(const std::vector<Variant>& variants);
EvaluationResult run_evaluation(const CorpusConfig& corpus,
                                const std::function<void(const VariantResult&)>& onVariant = {});
Json build_evaluation_report(const CorpusConfig& corpus, const EvaluationResult& result);
std::string render_evaluation_text(const EvaluationResult& result);

}  // namespace fuzzoracle::cli
