#include "fuzzoracle/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fuzzoracle/bugs.hpp"
#include "fuzzoracle/error.hpp"

namespace fuzzoracle::cli {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + msg);
}

void allow_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema(where, "expected an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : keys) ok = ok || item.key() == k;
    if (!ok) schema(where, "unknown field '" + item.key() + "'");
  }
}

Json section(const Json& doc, const char* key) {
  return doc.contains(key) ? doc.at(key) : Json::object();
}

// On the hill-car the agent defaults to the actor-critic unless told otherwise.
AgentConfig agent_for(const Json& doc, const EnvSpec& env) {
  Json agent = section(doc, "agent");
  if (agent.is_object() && !agent.contains("algorithm") && env.kind == EnvKind::HillCar) {
    agent["algorithm"] = "linear_actor_critic";
  }
  return io::decode_agent(agent);
}

std::optional<std::string> bug_field(const Json& j, const std::string& where) {
  if (!j.contains("bug") || j.at("bug").is_null()) return std::nullopt;
  if (!j.at("bug").is_string()) schema(where + ".bug", "expected a bug id or null");
  auto id = j.at("bug").get<std::string>();
  if (!find_bug(id)) throw Error(ErrorCode::UnknownBug, "unknown bug '" + id + "'");
  return id;
}

Label label_from(const std::string& text, const std::string& where) {
  if (text == "NonBuggy") return Label::NonBuggy;
  if (text == "Buggy") return Label::Buggy;
  schema(where, "expected 'NonBuggy' or 'Buggy'");
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string sig3(const std::optional<double>& v) { return v ? io::three_significant(*v) : "n/a"; }

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaViolation, path + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    // nlohmann reports "at line L, column C" in the message.
    throw Error(ErrorCode::SchemaViolation, path + ": " + e.what());
  }
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    schema("--set " + assignment, "expected key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const auto key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) schema("--set " + assignment, "empty path component");
    if (!node->is_object()) schema("--set " + assignment, "'" + key + "' is not inside an object");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

RunConfig decode_run_config(const Json& doc) {
  allow_keys(doc, "config", {"env", "agent", "program", "bug", "oracle", "output"});
  RunConfig c;
  c.env = io::decode_env(section(doc, "env"));
  c.agent = agent_for(doc, c.env);
  if (doc.contains("program")) {
    if (!doc.at("program").is_string()) schema("config.program", "expected a string");
    const auto p = doc.at("program").get<std::string>();
    if (p == "agent") c.program = ProgramKind::Agent;
    else if (p == "perfect_stub") c.program = ProgramKind::PerfectStub;
    else schema("config.program", "expected 'agent' or 'perfect_stub'");
  }
  c.bug = bug_field(doc, "config");
  c.oracle = io::decode_oracle(section(doc, "oracle"));
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    allow_keys(o, "config.output", {"dir", "emit_traces"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) schema("config.output.dir", "expected a string");
      c.outDir = o.at("dir").get<std::string>();
    }
    if (o.contains("emit_traces")) {
      if (!o.at("emit_traces").is_boolean()) schema("config.output.emit_traces", "expected a boolean");
      c.emitTraces = o.at("emit_traces").get<bool>();
    }
  }
  if (c.bug && c.program != ProgramKind::Agent) {
    schema("config.bug", "bugs can only be injected into the agent program");
  }
  return c;
}

Json encode(const RunConfig& c) {
  Json j;
  j["env"] = io::encode(c.env);
  j["program"] = c.program == ProgramKind::Agent ? "agent" : "perfect_stub";
  if (c.program == ProgramKind::Agent) j["agent"] = io::encode(c.agent);
  j["bug"] = c.bug ? Json(*c.bug) : Json(nullptr);
  j["oracle"] = io::encode(c.oracle);
  return j;
}

void apply_worker_env(OracleConfig& config) {
  const char* raw = std::getenv("FUZZORACLE_WORKERS");
  if (!raw || !*raw) return;
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(raw).size() || value == 0) {
    throw Error(ErrorCode::InvalidOracleConfig,
                std::string("FUZZORACLE_WORKERS must be a positive integer, got '") + raw + "'");
  }
  config.workers = config.workers == 0 ? value : std::min<std::size_t>(config.workers, value);
}

std::unique_ptr<Program> make_program(const RunConfig& config) {
  if (config.program == ProgramKind::PerfectStub) return std::make_unique<PerfectComplianceProgram>();
  AgentConfig agent = config.bug ? inject_bug(config.agent, *config.bug) : config.agent;
  return std::make_unique<AgentProgram>(std::move(agent));
}

Json build_report(const RunConfig& config, const Verdict& verdict) {
  Json policies = Json::array();
  for (const auto& p : verdict.perPolicy) {
    Json entries = Json::array();
    for (const auto& e : p.policy.entries()) {
      entries.push_back({{"state", io::encode_state(e.reference)},
                         {"action", io::encode_action(e.ideal)}});
    }
    Json rec;
    rec["policy_id"] = p.policyId;
    rec["min_reference_distance"] = p.policy.min_reference_distance();
    rec["entries"] = entries;
    rec["aborted_epochs"] = p.abortedEpochs;
    rec["trend"] = io::encode(p.trend);
    rec["series"] = p.series.values;
    policies.push_back(std::move(rec));
  }
  Json j;
  j["format"] = "fuzzoracle-report";
  j["version"] = 1;
  j["config"] = encode(config);
  j["verdict"] = std::string(to_string(verdict.label));
  j["true_count"] = verdict.trueCount;
  j["policy_count"] = verdict.perPolicy.size();
  j["ratio"] = verdict.ratio;
  j["policies"] = policies;
  return j;
}

std::string build_series_jsonl(const Verdict& verdict) {
  std::string out;
  for (const auto& p : verdict.perPolicy) {
    Json rec;
    rec["policy_id"] = p.policyId;
    rec["verdict"] = p.trend.verdict;
    rec["values"] = p.series.values;
    out += rec.dump();
    out += '\n';
  }
  return out;
}

std::string render_report_text(const RunConfig& config, const Verdict& verdict) {
  std::ostringstream os;
  const std::string program = config.program == ProgramKind::PerfectStub
                                  ? "perfect_stub"
                                  : (config.agent.algorithm == Algorithm::TabularQ
                                         ? "tabular_q"
                                         : "linear_actor_critic");
  os << "program   " << program << " (bug: " << config.bug.value_or("none") << ")\n"
     << "env       " << (config.env.kind == EnvKind::Grid ? "grid" : "hillcar") << "\n"
     << "oracle    I=" << config.oracle.policyCount << " E=" << config.oracle.epochs
     << " seed=" << config.oracle.masterSeed << " n=" << config.oracle.trend.window
     << " eps=" << io::three_significant(config.oracle.trend.convergenceEpsilon)
     << " delta=" << io::three_significant(config.oracle.trend.abnormalityDelta) << "\n\n";
  os << std::left << std::setw(8) << "policy" << std::setw(12) << "slope" << std::setw(8)
     << "conv" << std::setw(10) << "lower" << std::setw(10) << "abnormal" << std::setw(9)
     << "healthy" << "last\n";
  for (const auto& p : verdict.perPolicy) {
    const auto& t = p.trend;
    os << std::setw(8) << p.policyId << std::setw(12) << io::three_significant(t.slope)
       << std::setw(8) << (t.convergenceIndex ? std::to_string(*t.convergenceIndex) : "-")
       << std::setw(10) << (t.lowerBound ? io::three_significant(*t.lowerBound) : "-")
       << std::setw(10) << (t.abnormalityFound ? "yes" : "no") << std::setw(9)
       << (t.verdict ? "yes" : "no")
       << (p.series.values.empty() ? "-" : io::three_significant(p.series.values.back()))
       << "\n";
  }
  os << "\nverdict   " << to_string(verdict.label) << " (" << verdict.trueCount << "/"
     << verdict.perPolicy.size() << " healthy, ratio " << io::three_significant(verdict.ratio)
     << ", threshold " << io::three_significant(config.oracle.oracleThreshold) << ")\n";
  return os.str();
}

std::vector<Variant> default_variants() {
  std::vector<Variant> out{{"clean", std::nullopt, Label::NonBuggy}};
  for (const auto& b : bug_registry()) out.push_back({b.id, b.id, Label::Buggy});
  return out;
}

CorpusConfig decode_corpus(const Json& doc) {
  allow_keys(doc, "corpus", {"env", "agent", "oracle", "variants", "roc_thresholds", "output"});
  CorpusConfig c;
  c.env = io::decode_env(section(doc, "env"));
  c.agent = agent_for(doc, c.env);
  c.oracle = io::decode_oracle(section(doc, "oracle"));
  if (doc.contains("variants")) {
    const auto& vs = doc.at("variants");
    if (!vs.is_array() || vs.empty()) schema("corpus.variants", "expected a non-empty array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto w = "corpus.variants[" + std::to_string(i) + "]";
      allow_keys(vs[i], w, {"name", "bug", "label"});
      Variant v;
      if (vs[i].contains("bug") && !vs[i].at("bug").is_null()) {
        if (!vs[i].at("bug").is_string()) schema(w + ".bug", "expected a bug id or null");
        v.bug = vs[i].at("bug").get<std::string>();
      }
      v.name = vs[i].value("name", v.bug.value_or("clean"));
      v.groundTruth = v.bug ? Label::Buggy : Label::NonBuggy;
      if (vs[i].contains("label")) {
        if (!vs[i].at("label").is_string()) schema(w + ".label", "expected a string");
        v.groundTruth = label_from(vs[i].at("label").get<std::string>(), w + ".label");
      }
      c.variants.push_back(std::move(v));
    }
  } else {
    c.variants = default_variants();
  }
  if (doc.contains("roc_thresholds")) {
    const auto& t = doc.at("roc_thresholds");
    if (!t.is_array()) schema("corpus.roc_thresholds", "expected an array of numbers");
    for (const auto& x : t) {
      if (!x.is_number()) schema("corpus.roc_thresholds", "expected an array of numbers");
      c.rocThresholds.push_back(x.get<double>());
    }
  } else {
    c.rocThresholds = default_roc_thresholds();
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    allow_keys(o, "corpus.output", {"dir"});
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) schema("corpus.output.dir", "expected a string");
      c.outDir = o.at("dir").get<std::string>();
    }
  }
  return c;
}

void validate_variants(const std::vector<Variant>& variants) {
  if (variants.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no programs");
  for (const auto& v : variants) {
    if (v.bug && !find_bug(*v.bug)) {
      throw Error(ErrorCode::UnknownBug, "variant '" + v.name + "': unknown bug '" + *v.bug + "'");
    }
  }
}

EvaluationResult run_evaluation(const CorpusConfig& corpus,
                                const std::function<void(const VariantResult&)>& onVariant) {
  validate_variants(corpus.variants);
  corpus.env.validate();
  corpus.oracle.validate();

  EvaluationResult result;
  std::vector<ProgramOutcome> outcomes;
  for (const auto& v : corpus.variants) {
    const AgentConfig agent = v.bug ? inject_bug(corpus.agent, *v.bug) : corpus.agent;
    const auto verdict = oracle_main(AgentProgram(agent), corpus.env, corpus.oracle);
    VariantResult r{v, verdict.label, verdict.trueCount, verdict.perPolicy.size()};
    result.confusion.add(r.predicted, v.groundTruth);
    outcomes.push_back({r.trueCount, r.policyCount, v.groundTruth});
    if (onVariant) onVariant(r);
    result.programs.push_back(std::move(r));
  }
  result.metrics = confusion_metrics(result.confusion);
  result.roc = roc_sweep(outcomes, corpus.rocThresholds);
  return result;
}

Json build_evaluation_report(const CorpusConfig& corpus, const EvaluationResult& result) {
  Json programs = Json::array();
  for (const auto& r : result.programs) {
    Json p;
    p["name"] = r.variant.name;
    p["bug"] = r.variant.bug ? Json(*r.variant.bug) : Json(nullptr);
    if (r.variant.bug) p["category"] = std::string(to_string(find_bug(*r.variant.bug)->category));
    p["ground_truth"] = std::string(to_string(r.variant.groundTruth));
    p["predicted"] = std::string(to_string(r.predicted));
    p["true_count"] = r.trueCount;
    p["policy_count"] = r.policyCount;
    p["ratio"] = static_cast<double>(r.trueCount) / static_cast<double>(r.policyCount);
    programs.push_back(std::move(p));
  }
  Json detection = Json::object();
  for (const auto& r : result.programs) {
    if (r.variant.bug) detection[*r.variant.bug] = r.predicted == Label::Buggy;
  }
  const auto& m = result.metrics;
  Json roc = Json::array();
  for (const auto& pt : result.roc) {
    roc.push_back({{"threshold", pt.threshold},
                   {"fpr", optional_number(pt.fpr)},
                   {"tpr", optional_number(pt.tpr)}});
  }
  Json agent = io::encode(corpus.agent);
  Json j;
  j["format"] = "fuzzoracle-evaluation";
  j["version"] = 1;
  j["config"] = {{"env", io::encode(corpus.env)}, {"agent", agent},
                 {"oracle", io::encode(corpus.oracle)}};
  j["programs"] = programs;
  j["confusion"] = {{"tp", result.confusion.tp}, {"fp", result.confusion.fp},
                    {"tn", result.confusion.tn}, {"fn", result.confusion.fn}};
  j["metrics"] = {{"accuracy", optional_number(m.accuracy)},
                  {"precision", optional_number(m.precision)},
                  {"recall", optional_number(m.recall)},
                  {"f1", optional_number(m.f1)},
                  {"false_positive_rate", optional_number(m.falsePositiveRate)},
                  {"false_negative_rate", optional_number(m.falseNegativeRate)}};
  j["roc"] = roc;
  j["detected"] = detection;
  return j;
}

std::string render_evaluation_text(const EvaluationResult& result) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "program" << std::setw(18) << "category" << std::setw(11)
     << "truth" << std::setw(11) << "predicted" << "healthy\n";
  for (const auto& r : result.programs) {
    const auto* bug = r.variant.bug ? find_bug(*r.variant.bug) : nullptr;
    os << std::setw(22) << r.variant.name << std::setw(18)
       << (bug ? std::string(to_string(bug->category)) : "-") << std::setw(11)
       << to_string(r.variant.groundTruth) << std::setw(11) << to_string(r.predicted)
       << r.trueCount << "/" << r.policyCount << "\n";
  }
  const auto& c = result.confusion;
  const auto& m = result.metrics;
  os << "\nconfusion  tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << "\n"
     << "accuracy " << sig3(m.accuracy) << "  precision " << sig3(m.precision) << "  recall "
     << sig3(m.recall) << "  f1 " << sig3(m.f1) << "  fpr " << sig3(m.falsePositiveRate)
     << "  fnr " << sig3(m.falseNegativeRate) << "\n\nroc\n";
  for (const auto& pt : result.roc) {
    os << "  theta " << io::three_significant(pt.threshold) << "  fpr " << sig3(pt.fpr)
       << "  tpr " << sig3(pt.tpr) << "\n";
  }
  return os.str();
}

}  // namespace fuzzoracle::cli
