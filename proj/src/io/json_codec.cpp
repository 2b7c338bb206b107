#include "fuzzoracle/io/json_codec.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "fuzzoracle/error.hpp"

namespace fuzzoracle::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& message) {
  throw Error(ErrorCode::SchemaViolation, where + ": " + message);
}

void require_object(const Json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> keys;
  for (const char* k : allowed) keys.insert(k);
  for (const auto& item : j.items()) {
    if (!keys.contains(item.key())) fail(where, "unknown field '" + item.key() + "'");
  }
}

double get_real(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

std::uint64_t get_unsigned(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    fail(where, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

int get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename Getter>
void read(const Json& j, const char* key, const std::string& where, T& out, Getter get) {
  if (j.contains(key)) out = static_cast<T>(get(j.at(key), where + "." + key));
}

GridCell decode_cell(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected [row, col]");
  return {get_int(j[0], where + "[0]"), get_int(j[1], where + "[1]")};
}

Json encode_cell(const GridCell& c) { return Json::array({c.row, c.col}); }

const char* encode_shape_kind(ShapeKind k) {
  switch (k) {
    case ShapeKind::Linear: return "linear";
    case ShapeKind::Indicator: return "indicator";
    case ShapeKind::Gaussian: return "gaussian";
  }
  return "linear";
}

Json encode_shape(const MembershipShape& s) {
  Json j = {{"kind", encode_shape_kind(s.kind)}};
  if (s.radius) j["radius"] = *s.radius;
  if (s.kind == ShapeKind::Gaussian) j["width"] = s.width;
  return j;
}

MembershipShape decode_shape(const Json& j, const std::string& where) {
  require_object(j, where, {"kind", "radius", "width"});
  MembershipShape s;
  const auto kind = j.contains("kind") ? get_string(j.at("kind"), where + ".kind") : "linear";
  if (kind == "linear") s.kind = ShapeKind::Linear;
  else if (kind == "indicator") s.kind = ShapeKind::Indicator;
  else if (kind == "gaussian") s.kind = ShapeKind::Gaussian;
  else fail(where + ".kind", "unknown shape '" + kind + "'");
  if (j.contains("radius")) s.radius = get_real(j.at("radius"), where + ".radius");
  read(j, "width", where, s.width, get_real);
  return s;
}

Json encode_state_metric(const StateMetric& m) {
  switch (m.kind) {
    case StateMetricKind::Manhattan: return {{"kind", "manhattan"}};
    case StateMetricKind::Euclidean: return {{"kind", "euclidean"}};
    case StateMetricKind::NormalizedEuclidean:
      return {{"kind", "normalized_euclidean"}, {"lower", m.lower}, {"upper", m.upper}};
  }
  return {};
}

std::vector<double> decode_reals(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_real(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

StateMetric decode_state_metric(const Json& j, const std::string& where) {
  require_object(j, where, {"kind", "lower", "upper"});
  const auto kind = get_string(j.value("kind", Json("manhattan")), where + ".kind");
  if (kind == "manhattan") return StateMetric::manhattan();
  if (kind == "euclidean") return StateMetric::euclidean();
  if (kind == "normalized_euclidean") {
    if (!j.contains("lower") || !j.contains("upper")) fail(where, "normalized metric needs bounds");
    return StateMetric::normalized(decode_reals(j.at("lower"), where + ".lower"),
                                   decode_reals(j.at("upper"), where + ".upper"));
  }
  fail(where + ".kind", "unknown state metric '" + kind + "'");
}

}  // namespace

Json encode(const EnvSpec& spec) {
  Json j;
  j["kind"] = spec.kind == EnvKind::Grid ? "grid" : "hillcar";
  j["max_steps_per_epoch"] = spec.maxStepsPerEpoch;
  j["reward_mode"] = spec.rewardMode == RewardMode::Replace ? "replace" : "add";
  if (spec.kind == EnvKind::Grid) {
    Json holes = Json::array();
    for (const auto& h : spec.grid.holes) holes.push_back(encode_cell(h));
    j["grid"] = {{"rows", spec.grid.rows},
                 {"cols", spec.grid.cols},
                 {"holes", holes},
                 {"goal", encode_cell(spec.grid.goal)},
                 {"slip_probability", spec.grid.slipProbability}};
  } else {
    const auto& h = spec.hillcar;
    j["hillcar"] = {{"min_position", h.minPosition}, {"max_position", h.maxPosition},
                    {"min_velocity", h.minVelocity}, {"max_velocity", h.maxVelocity},
                    {"force", h.force},              {"gravity", h.gravity},
                    {"goal_position", h.goalPosition}, {"min_action", h.minAction},
                    {"max_action", h.maxAction}};
  }
  return j;
}

EnvSpec decode_env(const Json& j, const std::string& where) {
  require_object(j, where, {"kind", "max_steps_per_epoch", "reward_mode", "grid", "hillcar"});
  const auto kind = j.contains("kind") ? get_string(j.at("kind"), where + ".kind") : "grid";
  EnvSpec spec;
  if (kind == "hillcar") spec = EnvSpec::hill_car();
  else if (kind != "grid") fail(where + ".kind", "expected 'grid' or 'hillcar'");

  read(j, "max_steps_per_epoch", where, spec.maxStepsPerEpoch, get_unsigned);
  if (j.contains("reward_mode")) {
    const auto mode = get_string(j.at("reward_mode"), where + ".reward_mode");
    if (mode == "replace") spec.rewardMode = RewardMode::Replace;
    else if (mode == "add") spec.rewardMode = RewardMode::Add;
    else fail(where + ".reward_mode", "expected 'replace' or 'add'");
  }
  if (j.contains("grid")) {
    const auto w = where + ".grid";
    const auto& g = j.at("grid");
    require_object(g, w, {"rows", "cols", "holes", "goal", "slip_probability"});
    read(g, "rows", w, spec.grid.rows, get_int);
    read(g, "cols", w, spec.grid.cols, get_int);
    if (g.contains("holes")) {
      if (!g.at("holes").is_array()) fail(w + ".holes", "expected an array of cells");
      spec.grid.holes.clear();
      for (std::size_t i = 0; i < g.at("holes").size(); ++i) {
        spec.grid.holes.push_back(decode_cell(g.at("holes")[i], w + ".holes[" + std::to_string(i) + "]"));
      }
    }
    if (g.contains("goal")) spec.grid.goal = decode_cell(g.at("goal"), w + ".goal");
    read(g, "slip_probability", w, spec.grid.slipProbability, get_real);
  }
  if (j.contains("hillcar")) {
    const auto w = where + ".hillcar";
    const auto& h = j.at("hillcar");
    require_object(h, w, {"min_position", "max_position", "min_velocity", "max_velocity", "force",
                          "gravity", "goal_position", "min_action", "max_action"});
    auto& c = spec.hillcar;
    read(h, "min_position", w, c.minPosition, get_real);
    read(h, "max_position", w, c.maxPosition, get_real);
    read(h, "min_velocity", w, c.minVelocity, get_real);
    read(h, "max_velocity", w, c.maxVelocity, get_real);
    read(h, "force", w, c.force, get_real);
    read(h, "gravity", w, c.gravity, get_real);
    read(h, "goal_position", w, c.goalPosition, get_real);
    read(h, "min_action", w, c.minAction, get_real);
    read(h, "max_action", w, c.maxAction, get_real);
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return spec;
}

Json encode(const AgentConfig& c) {
  Json j;
  j["algorithm"] = c.algorithm == Algorithm::TabularQ ? "tabular_q" : "linear_actor_critic";
  j["learning_rate"] = c.learningRate;
  if (c.algorithm == Algorithm::LinearActorCritic) {
    j["critic_learning_rate"] = c.criticLearningRate;
  }
  j["discount"] = c.discount;
  j["epsilon_start"] = c.epsilonStart;
  j["epsilon_end"] = c.epsilonEnd;
  if (c.algorithm == Algorithm::LinearActorCritic) {
    j["noise_stddev"] = c.noiseStddev;
    j["features"] = {{"centers_per_dim", c.features.centersPerDim}, {"width", c.features.width}};
  }
  j["initial_value"] = c.initialValue;
  return j;
}

AgentConfig decode_agent(const Json& j, const std::string& where) {
  require_object(j, where, {"algorithm", "learning_rate", "critic_learning_rate", "discount",
                            "epsilon_start", "epsilon_end", "noise_stddev", "initial_value",
                            "features", "seed"});
  const auto algo =
      j.contains("algorithm") ? get_string(j.at("algorithm"), where + ".algorithm") : "tabular_q";
  AgentConfig c;
  if (algo == "linear_actor_critic") c = AgentConfig::actor_critic();
  else if (algo != "tabular_q") fail(where + ".algorithm", "expected 'tabular_q' or 'linear_actor_critic'");

  read(j, "learning_rate", where, c.learningRate, get_real);
  read(j, "critic_learning_rate", where, c.criticLearningRate, get_real);
  read(j, "discount", where, c.discount, get_real);
  read(j, "epsilon_start", where, c.epsilonStart, get_real);
  read(j, "epsilon_end", where, c.epsilonEnd, get_real);
  read(j, "noise_stddev", where, c.noiseStddev, get_real);
  read(j, "initial_value", where, c.initialValue, get_real);
  read(j, "seed", where, c.seed, get_unsigned);
  if (j.contains("features")) {
    const auto w = where + ".features";
    const auto& f = j.at("features");
    require_object(f, w, {"centers_per_dim", "width"});
    read(f, "centers_per_dim", w, c.features.centersPerDim, get_unsigned);
    read(f, "width", w, c.features.width, get_real);
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return c;
}

Json encode(const OracleConfig& c) {
  Json j;
  j["policies"] = c.policyCount;
  j["epochs"] = c.epochs;
  j["theta_orcl"] = c.oracleThreshold;
  j["window"] = c.trend.window;
  j["epsilon"] = c.trend.convergenceEpsilon;
  j["delta"] = c.trend.abnormalityDelta;
  j["theta_poli_cmpl"] = c.complianceThreshold;
  j["filter"] = c.filter == ComplianceFilter::StateMembership ? "state" : "step";
  if (c.policySize) j["policy_size"] = *c.policySize;
  j["master_seed"] = c.masterSeed;
  j["reward_scale"] = c.rewardScale;
  return j;
}

OracleConfig decode_oracle(const Json& j, const std::string& where) {
  require_object(j, where, {"policies", "epochs", "theta_orcl", "window", "epsilon", "delta",
                            "theta_poli_cmpl", "filter", "policy_size", "master_seed",
                            "reward_scale", "workers"});
  OracleConfig c;
  read(j, "policies", where, c.policyCount, get_unsigned);
  read(j, "epochs", where, c.epochs, get_unsigned);
  read(j, "theta_orcl", where, c.oracleThreshold, get_real);
  read(j, "window", where, c.trend.window, get_unsigned);
  read(j, "epsilon", where, c.trend.convergenceEpsilon, get_real);
  read(j, "delta", where, c.trend.abnormalityDelta, get_real);
  read(j, "theta_poli_cmpl", where, c.complianceThreshold, get_real);
  if (j.contains("filter")) {
    const auto f = get_string(j.at("filter"), where + ".filter");
    if (f == "state") c.filter = ComplianceFilter::StateMembership;
    else if (f == "step") c.filter = ComplianceFilter::StepMembership;
    else fail(where + ".filter", "expected 'state' or 'step'");
  }
  if (j.contains("policy_size") && !j.at("policy_size").is_null()) {
    c.policySize = get_unsigned(j.at("policy_size"), where + ".policy_size");
  }
  read(j, "master_seed", where, c.masterSeed, get_unsigned);
  read(j, "reward_scale", where, c.rewardScale, get_real);
  read(j, "workers", where, c.workers, get_unsigned);
  try {
    c.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
  return c;
}

Json encode(const TrendReport& r) {
  Json j;
  j["slope"] = r.slope;
  j["convergence_index"] = r.convergenceIndex ? Json(*r.convergenceIndex) : Json(nullptr);
  j["lower_bound"] = r.lowerBound ? Json(*r.lowerBound) : Json(nullptr);
  j["abnormality_found"] = r.abnormalityFound;
  j["verdict"] = r.verdict;
  return j;
}

Json encode_state(const StatePoint& state) {
  if (const auto* c = std::get_if<GridCell>(&state)) return encode_cell(*c);
  return Json(std::get<Coordinates>(state));
}

StatePoint decode_state(const Json& j, bool grid, const std::string& where) {
  if (grid) return decode_cell(j, where);
  auto values = decode_reals(j, where);
  if (values.empty()) fail(where, "state needs at least one coordinate");
  return values;
}

Json encode_action(const ActionPoint& action) {
  if (const auto* d = std::get_if<DiscreteAction>(&action)) return Json::array({d->id});
  return Json(std::get<ContinuousAction>(action).values);
}

ActionPoint decode_action(const Json& j, bool discrete, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array");
  if (discrete) {
    if (j.size() != 1) fail(where, "discrete action is a single id");
    return DiscreteAction{static_cast<std::size_t>(get_unsigned(j[0], where + "[0]"))};
  }
  return ContinuousAction{decode_reals(j, where)};
}

Json encode_policy(const IntendedPolicy& policy, const EnvSpec& env, std::size_t policyId) {
  Json entries = Json::array();
  for (const auto& e : policy.entries()) {
    entries.push_back({{"state", encode_state(e.reference)}, {"action", encode_action(e.ideal)}});
  }
  Json action_metric = {{"kind", policy.action_metric().kind == ActionMetricKind::Discrete
                                      ? "discrete"
                                      : "euclidean"}};
  Json j;
  j["format"] = "fuzzoracle-policy";
  j["version"] = 1;
  j["policy_id"] = policyId;
  j["env"] = encode(env);
  j["state_metric"] = encode_state_metric(policy.state_metric());
  j["action_metric"] = action_metric;
  j["state_shape"] = encode_shape(policy.state_shape());
  j["action_shape"] = encode_shape(policy.action_shape());
  j["min_reference_distance"] = policy.min_reference_distance();
  j["entries"] = entries;
  return j;
}

PolicyDocument decode_policy(const Json& j, const std::string& where) {
  require_object(j, where, {"format", "version", "policy_id", "env", "state_metric",
                            "action_metric", "state_shape", "action_shape",
                            "min_reference_distance", "entries"});
  if (j.value("format", std::string()) != "fuzzoracle-policy") {
    fail(where + ".format", "expected 'fuzzoracle-policy'");
  }
  if (j.value("version", 0) != 1) fail(where + ".version", "unsupported version");
  if (!j.contains("env")) fail(where, "missing 'env'");
  EnvSpec env = decode_env(j.at("env"), where + ".env");

  StateMetric stateMetric = j.contains("state_metric")
                                ? decode_state_metric(j.at("state_metric"), where + ".state_metric")
                                : default_state_metric(env);
  ActionMetric actionMetric = default_action_metric(env);
  if (j.contains("action_metric")) {
    const auto w = where + ".action_metric";
    require_object(j.at("action_metric"), w, {"kind"});
    const auto kind = get_string(j.at("action_metric").value("kind", Json("discrete")), w + ".kind");
    if (kind == "discrete") actionMetric = ActionMetric::discrete();
    else if (kind == "euclidean") actionMetric = ActionMetric::euclidean();
    else fail(w + ".kind", "expected 'discrete' or 'euclidean'");
  }
  MembershipShape stateShape = j.contains("state_shape")
                                   ? decode_shape(j.at("state_shape"), where + ".state_shape")
                                   : MembershipShape::linear();
  MembershipShape actionShape = j.contains("action_shape")
                                    ? decode_shape(j.at("action_shape"), where + ".action_shape")
                                    : default_action_shape(env);

  if (!j.contains("entries") || !j.at("entries").is_array()) fail(where, "missing 'entries' array");
  std::vector<PolicyEntry> entries;
  const bool grid = env.kind == EnvKind::Grid;
  for (std::size_t i = 0; i < j.at("entries").size(); ++i) {
    const auto w = where + ".entries[" + std::to_string(i) + "]";
    const auto& e = j.at("entries")[i];
    require_object(e, w, {"state", "action"});
    if (!e.contains("state") || !e.contains("action")) fail(w, "needs 'state' and 'action'");
    PolicyEntry entry{decode_state(e.at("state"), grid, w + ".state"),
                      decode_action(e.at("action"), grid, w + ".action")};
    if (!env.contains(entry.reference)) fail(w + ".state", "outside the environment");
    if (!env.valid_action(entry.ideal)) fail(w + ".action", "not a valid action");
    entries.push_back(std::move(entry));
  }
  std::size_t policyId = 0;
  read(j, "policy_id", where, policyId, get_unsigned);
  try {
    return {env, policyId,
            IntendedPolicy(std::move(entries), std::move(stateMetric), actionMetric, stateShape,
                           actionShape)};
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

std::string env_fingerprint(const EnvSpec& spec) {
  const auto text = encode(spec).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string three_significant(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

}  // namespace fuzzoracle::io
