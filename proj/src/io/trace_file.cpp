#include "fuzzoracle/io/trace_file.hpp"

#include <fstream>
#include <sstream>

#include "fuzzoracle/error.hpp"
#include "fuzzoracle/io/json_codec.hpp"

namespace fuzzoracle::io {

namespace {

bool grid_states(const RunLog& log) {
  for (const auto& e : log.epochs) {
    if (!e.steps.empty()) return is_grid(e.steps.front().state);
  }
  return true;
}

bool discrete_actions(const RunLog& log) {
  for (const auto& e : log.epochs) {
    if (!e.steps.empty()) return is_discrete(e.steps.front().action);
  }
  return true;
}

std::size_t unsigned_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(ErrorCode::SchemaViolation, where + ": '" + key + "' must be a non-negative integer");
  }
  return j.at(key).get<std::size_t>();
}

}  // namespace

void write_trace(std::ostream& out, const RunLog& log, const std::string& envFingerprint) {
  Json aborted = Json::array();
  for (const auto& e : log.epochs) {
    if (e.aborted) aborted.push_back(e.epochIndex);
  }
  Json header;
  header["format"] = "fuzzoracle-trace";
  header["version"] = 1;
  header["env_fingerprint"] = envFingerprint;
  header["policy_id"] = log.policyId;
  header["epochs"] = log.epochs.size();
  header["state_kind"] = grid_states(log) ? "grid" : "continuous";
  header["action_kind"] = discrete_actions(log) ? "discrete" : "continuous";
  header["aborted_epochs"] = aborted;
  out << header.dump() << '\n';

  for (const auto& e : log.epochs) {
    std::size_t step = 0;
    for (const auto& s : e.steps) {
      Json rec;
      rec["epoch"] = e.epochIndex;
      rec["step"] = ++step;
      rec["state"] = encode_state(s.state);
      rec["action"] = encode_action(s.action);
      rec["reward"] = s.reward;
      out << rec.dump() << '\n';
    }
  }
}

std::string write_trace(const RunLog& log, const std::string& envFingerprint) {
  std::ostringstream out;
  write_trace(out, log, envFingerprint);
  return out.str();
}

TraceDocument read_trace(std::istream& in, const std::string& source) {
  TraceDocument doc;
  std::string line;
  std::size_t lineNo = 0;
  bool haveHeader = false;
  std::size_t expectedStep = 1;

  auto where = [&] { return source + ":" + std::to_string(lineNo); };
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::SchemaViolation, where() + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      fail(std::string("malformed JSON (") + e.what() + ")");
    }
    if (!j.is_object()) fail("expected an object");

    if (!haveHeader) {
      if (j.value("format", std::string()) != "fuzzoracle-trace") fail("missing trace header");
      if (j.value("version", 0) != 1) fail("unsupported trace version");
      auto& h = doc.header;
      if (!j.contains("env_fingerprint") || !j.at("env_fingerprint").is_string()) {
        fail("'env_fingerprint' must be a string");
      }
      h.envFingerprint = j.at("env_fingerprint").get<std::string>();
      h.policyId = unsigned_field(j, "policy_id", where());
      h.epochs = unsigned_field(j, "epochs", where());
      const auto sk = j.value("state_kind", std::string("grid"));
      const auto ak = j.value("action_kind", std::string("discrete"));
      if (sk != "grid" && sk != "continuous") fail("'state_kind' must be grid or continuous");
      if (ak != "discrete" && ak != "continuous") fail("'action_kind' must be discrete or continuous");
      h.gridStates = sk == "grid";
      h.discreteActions = ak == "discrete";
      if (j.contains("aborted_epochs")) {
        if (!j.at("aborted_epochs").is_array()) fail("'aborted_epochs' must be an array");
        for (const auto& a : j.at("aborted_epochs")) {
          if (!a.is_number_unsigned()) fail("'aborted_epochs' entries must be epoch indices");
          h.abortedEpochs.push_back(a.get<std::size_t>());
        }
      }
      doc.log.policyId = h.policyId;
      haveHeader = true;
      continue;
    }

    for (const auto& item : j.items()) {
      const auto& k = item.key();
      if (k != "epoch" && k != "step" && k != "state" && k != "action" && k != "reward") {
        fail("unknown field '" + k + "'");
      }
    }
    const auto epoch = unsigned_field(j, "epoch", where());
    const auto step = unsigned_field(j, "step", where());
    const std::size_t current = doc.log.epochs.size();
    if (epoch == current + 1) {
      if (step != 1) fail("epoch " + std::to_string(epoch) + " must start at step 1");
      doc.log.epochs.push_back({epoch, {}, false});
      expectedStep = 1;
    } else if (epoch != current || current == 0) {
      fail("epoch " + std::to_string(epoch) + " out of order (expected " +
           std::to_string(current == 0 ? 1 : current) + " or " + std::to_string(current + 1) + ")");
    }
    if (step != expectedStep) {
      fail("step " + std::to_string(step) + " out of order (expected " +
           std::to_string(expectedStep) + ")");
    }
    ++expectedStep;
    if (!j.contains("state") || !j.contains("action") || !j.contains("reward")) {
      fail("step needs 'state', 'action' and 'reward'");
    }
    if (!j.at("reward").is_number()) fail("'reward' must be a number");
    TraceStep ts{decode_state(j.at("state"), doc.header.gridStates, where() + ": state"),
                 decode_action(j.at("action"), doc.header.discreteActions, where() + ": action"),
                 j.at("reward").get<double>()};
    auto& steps = doc.log.epochs.back().steps;
    if (!steps.empty()) {
      const auto* prev = std::get_if<Coordinates>(&steps.front().state);
      const auto* cur = std::get_if<Coordinates>(&ts.state);
      if (prev && cur && prev->size() != cur->size()) fail("state dimension changed");
    }
    steps.push_back(std::move(ts));
  }

  if (!haveHeader) throw Error(ErrorCode::EmptyLog, source + ": empty trace");
  if (doc.log.epochs.size() != doc.header.epochs) {
    throw Error(ErrorCode::SchemaViolation,
                source + ": header declares " + std::to_string(doc.header.epochs) +
                    " epochs but " + std::to_string(doc.log.epochs.size()) + " were found");
  }
  if (doc.log.epochs.empty()) throw Error(ErrorCode::EmptyLog, source + ": trace has no steps");
  for (auto idx : doc.header.abortedEpochs) {
    if (idx == 0 || idx > doc.log.epochs.size()) {
      throw Error(ErrorCode::SchemaViolation,
                  source + ": aborted epoch " + std::to_string(idx) + " does not exist");
    }
    doc.log.epochs[idx - 1].aborted = true;
  }
  return doc;
}

TraceDocument read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaViolation, path + ": cannot open");
  return read_trace(in, path);
}

}  // namespace fuzzoracle::io
