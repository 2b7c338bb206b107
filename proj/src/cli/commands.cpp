#include "fuzzoracle/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fuzzoracle/bugs.hpp"
#include "fuzzoracle/cli/run_config.hpp"
#include "fuzzoracle/error.hpp"
#include "fuzzoracle/io/trace_file.hpp"

namespace fuzzoracle::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::SchemaViolation, path.string() + ": cannot write");
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int exit_code(Label label) { return label == Label::NonBuggy ? kExitNonBuggy : kExitBuggy; }

// Options shared by the commands that assemble a config document.
struct ConfigOptions {
  std::string configPath;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> policies;
  std::optional<std::string> out;

  void attach(CLI::App* app, const char* configFlag = "--config") {
    app->add_option(configFlag, configPath, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override a config value: key.path=value (repeatable)");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--epochs", epochs, "training epochs per policy");
    app->add_option("--policies", policies, "number of intended policies");
    app->add_option("--out", out, "output directory");
  }

  Json document() const {
    Json doc = configPath.empty() ? Json::object() : load_json_file(configPath);
    if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, configPath + ": expected an object");
    for (const auto& s : sets) apply_override(doc, s);
    if (seed) doc["oracle"]["master_seed"] = *seed;
    if (epochs) doc["oracle"]["epochs"] = *epochs;
    if (policies) doc["oracle"]["policies"] = *policies;
    if (out) doc["output"]["dir"] = *out;
    return doc;
  }
};

struct TestOptions {
  ConfigOptions common;
  std::optional<std::string> bug;
  std::optional<std::string> program;
  std::optional<std::size_t> workers;
  bool emitTraces = false;
};

int cmd_test(const TestOptions& opt, std::ostream& out, std::ostream& err) {
  Json doc = opt.common.document();
  if (opt.bug) doc["bug"] = *opt.bug == "none" ? Json(nullptr) : Json(*opt.bug);
  if (opt.program) doc["program"] = *opt.program;
  if (opt.emitTraces) doc["output"]["emit_traces"] = true;
  RunConfig cfg = decode_run_config(doc);
  apply_worker_env(cfg.oracle);
  if (opt.workers) cfg.oracle.workers = *opt.workers;

  const auto program = make_program(cfg);
  const auto started = std::chrono::steady_clock::now();
  const auto verdict = oracle_main(*program, cfg.env, cfg.oracle, {cfg.emitTraces});
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  write_file(dir / "report.json", dump(build_report(cfg, verdict)));
  write_file(dir / "series.jsonl", build_series_jsonl(verdict));
  const auto text = render_report_text(cfg, verdict);
  write_file(dir / "report.txt", text);
  const std::size_t workers =
      cfg.oracle.workers > 0 ? cfg.oracle.workers
                             : std::max(1u, std::thread::hardware_concurrency());
  Json runtime = {{"wall_seconds", elapsed.count()}, {"workers", workers}};
  write_file(dir / "runtime.json", dump(runtime));

  if (cfg.emitTraces) {
    fs::create_directories(dir / "policies");
    fs::create_directories(dir / "traces");
    const auto fingerprint = io::env_fingerprint(cfg.env);
    for (const auto& p : verdict.perPolicy) {
      const auto stem = "policy_" + std::to_string(p.policyId);
      write_file(dir / "policies" / (stem + ".json"),
                 dump(io::encode_policy(p.policy, cfg.env, p.policyId)));
      write_file(dir / "traces" / (stem + ".jsonl"), io::write_trace(*p.log, fingerprint));
    }
  }
  out << text;
  err << "wrote " << (dir / "report.json").string() << "\n";
  return exit_code(verdict.label);
}

struct AnalyzeOptions {
  std::vector<std::string> policies;
  std::vector<std::string> traces;
  std::string configPath;
  std::vector<std::string> sets;
  std::optional<std::size_t> window;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> thetaPoli;
  std::optional<double> thetaOrcl;
  std::optional<std::string> filter;
  std::optional<std::string> out;
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  if (opt.policies.size() != opt.traces.size()) {
    throw Error(ErrorCode::SchemaViolation, "analyze needs one --policy per --trace (got " +
                                                std::to_string(opt.policies.size()) + " and " +
                                                std::to_string(opt.traces.size()) + ")");
  }
  Json doc = opt.configPath.empty() ? Json::object() : load_json_file(opt.configPath);
  for (const auto& s : opt.sets) apply_override(doc, s);
  Json oracle = doc.contains("oracle") ? doc.at("oracle") : Json::object();
  if (opt.window) oracle["window"] = *opt.window;
  if (opt.epsilon) oracle["epsilon"] = *opt.epsilon;
  if (opt.delta) oracle["delta"] = *opt.delta;
  if (opt.thetaPoli) oracle["theta_poli_cmpl"] = *opt.thetaPoli;
  if (opt.thetaOrcl) oracle["theta_orcl"] = *opt.thetaOrcl;
  if (opt.filter) oracle["filter"] = *opt.filter;
  const OracleConfig cfg = io::decode_oracle(oracle);

  Verdict verdict;
  Json runs = Json::array();
  for (std::size_t i = 0; i < opt.traces.size(); ++i) {
    const auto policyDoc = io::decode_policy(load_json_file(opt.policies[i]), opt.policies[i]);
    const auto trace = io::read_trace_file(opt.traces[i]);
    if (io::env_fingerprint(policyDoc.env) != trace.header.envFingerprint) {
      throw Error(ErrorCode::SchemaViolation,
                  opt.traces[i] + ": environment fingerprint does not match " + opt.policies[i]);
    }
    if (trace.header.gridStates != (policyDoc.env.kind == EnvKind::Grid)) {
      throw Error(ErrorCode::StateKindMismatch,
                  opt.traces[i] + ": state kind does not match the policy environment");
    }
    for (const auto& epoch : trace.log.epochs) {
      for (std::size_t k = 0; k < epoch.steps.size(); ++k) {
        const auto& step = epoch.steps[k];
        if (!policyDoc.env.contains(step.state) || !policyDoc.env.valid_action(step.action)) {
          throw Error(ErrorCode::SchemaViolation,
                      opt.traces[i] + ": epoch " + std::to_string(epoch.epochIndex) + " step " +
                          std::to_string(k + 1) + " is outside the policy environment");
        }
      }
    }
    const auto series = policy_compliance_series(policyDoc.policy, trace.log,
                                                 cfg.complianceThreshold, cfg.filter);
    const auto trend = judge_series(series, trace.log, cfg.trend);
    if (trend.verdict) ++verdict.trueCount;
    runs.push_back({{"policy", opt.policies[i]},
                    {"trace", opt.traces[i]},
                    {"policy_id", trace.header.policyId},
                    {"trend", io::encode(trend)},
                    {"series", series.values}});
    verdict.perPolicy.push_back({trace.header.policyId, policyDoc.policy, series, trend,
                                 trace.log.aborted_epochs(), std::nullopt});
  }
  if (verdict.perPolicy.empty()) throw Error(ErrorCode::EmptyLog, "analyze needs at least one trace");
  verdict.ratio =
      static_cast<double>(verdict.trueCount) / static_cast<double>(verdict.perPolicy.size());
  verdict.label = decide(verdict.trueCount, verdict.perPolicy.size(), cfg.oracleThreshold);

  for (const auto& p : verdict.perPolicy) {
    const auto& values = p.series.values;
    out << "policy " << p.policyId << "  series";
    if (values.size() <= 12) {
      for (double v : values) out << " " << io::three_significant(v);
    } else {
      out << " (" << values.size() << " epochs, last " << io::three_significant(values.back())
          << ")";
    }
    out << "  slope " << io::three_significant(p.trend.slope) << "  healthy "
        << (p.trend.verdict ? "yes" : "no") << "\n";
  }
  out << "verdict " << to_string(verdict.label) << " (" << verdict.trueCount << "/"
      << verdict.perPolicy.size() << " healthy)\n";

  if (opt.out) {
    const fs::path dir(*opt.out);
    fs::create_directories(dir);
    Json report;
    report["format"] = "fuzzoracle-analysis";
    report["version"] = 1;
    report["oracle"] = io::encode(cfg);
    report["verdict"] = std::string(to_string(verdict.label));
    report["true_count"] = verdict.trueCount;
    report["policy_count"] = verdict.perPolicy.size();
    report["ratio"] = verdict.ratio;
    report["runs"] = runs;
    write_file(dir / "analysis.json", dump(report));
    err << "wrote " << (dir / "analysis.json").string() << "\n";
  }
  return exit_code(verdict.label);
}

struct EvaluateOptions {
  ConfigOptions common;
  std::optional<std::size_t> workers;
};

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  CorpusConfig corpus = decode_corpus(opt.common.document());
  apply_worker_env(corpus.oracle);
  if (opt.workers) corpus.oracle.workers = *opt.workers;
  validate_variants(corpus.variants);

  const auto result = run_evaluation(corpus, [&](const VariantResult& r) {
    err << r.variant.name << ": " << to_string(r.predicted) << " (" << r.trueCount << "/"
        << r.policyCount << " healthy)\n";
  });
  const fs::path dir(corpus.outDir);
  fs::create_directories(dir);
  write_file(dir / "evaluation.json", dump(build_evaluation_report(corpus, result)));
  const auto text = render_evaluation_text(result);
  write_file(dir / "evaluation.txt", text);
  out << text;
  return kExitNonBuggy;
}

struct GenerateOptions {
  ConfigOptions common;
  std::optional<std::size_t> size;
};

int cmd_policies_generate(const GenerateOptions& opt, std::ostream& out) {
  Json doc = opt.common.document();
  if (opt.size) doc["oracle"]["policy_size"] = *opt.size;
  const RunConfig cfg = decode_run_config(doc);
  const auto policies = oracle_policies(cfg.env, cfg.oracle);
  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const auto path = dir / ("policy_" + std::to_string(i) + ".json");
    write_file(path, dump(io::encode_policy(policies[i], cfg.env, i)));
    out << path.string() << "\n";
  }
  return kExitNonBuggy;
}

int cmd_bugs_list(bool json, std::ostream& out) {
  if (json) {
    Json list = Json::array();
    for (const auto& b : bug_registry()) {
      list.push_back({{"id", b.id},
                      {"category", std::string(to_string(b.category))},
                      {"description", b.description}});
    }
    out << dump(list);
    return kExitNonBuggy;
  }
  for (const auto& b : bug_registry()) {
    out << std::left << std::setw(22) << b.id << std::setw(18) << to_string(b.category)
        << b.description << "\n";
  }
  return kExitNonBuggy;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fuzzy-compliance test oracle for reinforcement learning programs", "fuzzoracle"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fuzzoracle 1.0.0");

  TestOptions testOpt;
  auto* test = app.add_subcommand("test", "run the oracle against a program; exit 0 NonBuggy, 1 Buggy");
  testOpt.common.attach(test);
  test->add_option("--bug", testOpt.bug, "inject a registered bug ('none' clears it)");
  test->add_option("--program", testOpt.program, "agent | perfect_stub");
  test->add_option("--workers", testOpt.workers, "worker threads (overrides FUZZORACLE_WORKERS)");
  test->add_flag("--emit-traces", testOpt.emitTraces, "also write policies/ and traces/");

  AnalyzeOptions anaOpt;
  auto* analyze = app.add_subcommand("analyze", "judge recorded traces against their policies");
  analyze->add_option("--policy", anaOpt.policies, "policy JSON (repeat, paired with --trace)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--trace", anaOpt.traces, "trace JSONL (repeat)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--config", anaOpt.configPath, "config file; only 'oracle' is read")
      ->check(CLI::ExistingFile);
  analyze->add_option("--set", anaOpt.sets, "override a config value: key.path=value");
  analyze->add_option("--window", anaOpt.window, "convergence window n");
  analyze->add_option("--epsilon", anaOpt.epsilon, "convergence tolerance");
  analyze->add_option("--delta", anaOpt.delta, "abnormality margin");
  analyze->add_option("--theta-poli", anaOpt.thetaPoli, "state-membership filter threshold");
  analyze->add_option("--theta-orcl", anaOpt.thetaOrcl, "oracle threshold");
  analyze->add_option("--filter", anaOpt.filter, "state | step");
  analyze->add_option("--out", anaOpt.out, "write analysis.json into this directory");

  EvaluateOptions evalOpt;
  auto* evaluate = app.add_subcommand("evaluate", "score the oracle on a labelled corpus");
  evalOpt.common.attach(evaluate, "--corpus");
  evaluate->add_option("--workers", evalOpt.workers, "worker threads");

  auto* policies = app.add_subcommand("policies", "intended-policy utilities");
  policies->require_subcommand(1);
  GenerateOptions genOpt;
  auto* generate = policies->add_subcommand("generate", "write the policies a test run would use");
  genOpt.common.attach(generate);
  generate->add_option("--size", genOpt.size, "reference states per policy");

  auto* bugs = app.add_subcommand("bugs", "bug registry");
  bugs->require_subcommand(1);
  bool bugsJson = false;
  auto* list = bugs->add_subcommand("list", "list injectable bugs");
  list->add_flag("--json", bugsJson, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*test) return cmd_test(testOpt, out, err);
    if (*analyze) return cmd_analyze(anaOpt, out, err);
    if (*evaluate) return cmd_evaluate(evalOpt, out, err);
    if (*generate) return cmd_policies_generate(genOpt, out);
    if (*list) return cmd_bugs_list(bugsJson, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"fuzzoracle"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fuzzoracle::cli
