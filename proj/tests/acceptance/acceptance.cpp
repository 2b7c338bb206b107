// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "brute_force.hpp"
#include "fuzzoracle/bugs.hpp"
#include "fuzzoracle/cli/commands.hpp"
#include "fuzzoracle/cli/run_config.hpp"
#include "fuzzoracle/evaluation.hpp"
#include "fuzzoracle/oracle.hpp"

using namespace fuzzoracle;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = FUZZORACLE_FIXTURE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

double run_criterion(int id, const char* title, const std::function<Outcome()>& body,
                     double budgetSeconds = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budgetSeconds > 0.0 && secs > budgetSeconds) {
    o.pass = false;
    o.detail += " [over time budget " + std::to_string(budgetSeconds) + " s]";
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3f s", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << ": " << o.detail
            << " (" << timing << ")" << std::endl;
  if (!o.pass) ++failures;
  return secs;
}

std::string fixed2(double v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream out, errs;
  const int code = cli::run(args, out, errs);
  if (err) *err = errs.str();
  return code;
}

cli::RunConfig clean_config() {
  return cli::decode_run_config(cli::load_json_file(kFixtures + "/grid_clean.json"));
}

std::size_t count_label(const AgentConfig& agent, Label wanted) {
  const auto base = clean_config();
  std::size_t hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto oracle = base.oracle;
    oracle.masterSeed = seed;
    if (oracle_main(AgentProgram(agent), base.env, oracle).label == wanted) ++hits;
  }
  return hits;
}

IntendedPolicy random_grid_policy(std::mt19937_64& rng, std::vector<PolicyEntry>& entries) {
  auto cells = brute::open_cells_4x4();
  std::shuffle(cells.begin(), cells.end(), rng);
  const std::size_t size = 2 + rng() % 4;
  entries.clear();
  for (std::size_t k = 0; k < size; ++k) entries.push_back({cells[k], DiscreteAction{rng() % 4}});
  return IntendedPolicy(entries, StateMetric::manhattan(), ActionMetric::discrete(), MembershipShape::linear(),
                        MembershipShape::indicator());
}

}  // namespace

int main() {
  const auto scratch = fs::temp_directory_path() / "fuzzoracle_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  run_criterion(1, "metric fixture", [] {
    const auto m = confusion_metrics(ConfusionMatrix{10, 0, 2, 10});
    const std::string got = fixed2(*m.accuracy) + " / " + fixed2(*m.precision) + " / " + fixed2(*m.recall) +
                            " / " + fixed2(*m.f1);
    return Outcome{got == "0.55 / 1.00 / 0.50 / 0.67", "accuracy/precision/recall/f1 = " + got};
  }, 0.001);

  run_criterion(2, "compliance series vs brute force", [] {
    std::mt19937_64 rng(2024);
    int equal = 0;
    const int trials = 200;
    std::vector<PolicyEntry> entries;
    for (int t = 0; t < trials; ++t) {
      const auto policy = random_grid_policy(rng, entries);
      const auto log = brute::random_grid_log(rng, 5, 20);
      const double theta = double(rng() % 11) / 10.0;
      const auto got = policy_compliance_series(policy, log, theta, ComplianceFilter::StateMembership);
      if (got.values == brute::compliance_series(entries, log, theta, false, brute::manhattan)) ++equal;
    }
    return Outcome{equal == trials, std::to_string(equal) + "/" + std::to_string(trials) + " logs bit-identical"};
  }, 10.0);

  run_criterion(3, "trend-analysis suite", [] {
    const TrendParams p{5, 0.05, 0.1};
    const bool decreasing = trend_analysis(std::vector<double>{0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3}, p).verdict;
    std::vector<double> rising;
    for (int i = 0; i < 30; ++i) rising.push_back(0.03 * i);
    const bool increasing = trend_analysis(rising, p).verdict;
    std::vector<double> drop{0.1, 0.3, 0.5, 0.7};
    for (int i = 0; i < 10; ++i) drop.push_back(0.9);
    for (int i = 0; i < 5; ++i) drop.push_back(0.2);
    for (int i = 0; i < 30; ++i) drop.push_back(0.9);
    const auto dropReport = trend_analysis(drop, p);
    const bool ok = !decreasing && increasing && !dropReport.verdict && dropReport.slope >= 0.0;
    return Outcome{ok, std::string("decreasing=") + (decreasing ? "True" : "False") +
                           " increasing=" + (increasing ? "True" : "False") +
                           " converge-then-drop=" + (dropReport.verdict ? "True" : "False")};
  }, 1.0);

  const double cleanSecs = run_criterion(4, "clean agent false-positive check", [] {
    const auto n = count_label(clean_config().agent, Label::NonBuggy);
    return Outcome{n >= 9, "NonBuggy in " + std::to_string(n) + "/10 seeds (need >= 9)"};
  }, 600.0);

  run_criterion(5, "severe-bug detection", [] {
    bool ok = true;
    std::string detail;
    for (const char* bug : {"REWARD_NEGATED", "LR_ZERO", "UPDATE_SKIPPED", "EPSILON_FROZEN_ONE"}) {
      const auto n = count_label(inject_bug(clean_config().agent, bug), Label::Buggy);
      ok = ok && n >= 8;
      detail += std::string(detail.empty() ? "" : ", ") + bug + " " + std::to_string(n) + "/10";
    }
    return Outcome{ok, "Buggy in " + detail + " (need >= 8 each)"};
  }, 1800.0);

  run_criterion(6, "ROC properties on the 12-variant corpus", [] {
    const auto corpus = cli::decode_corpus(cli::load_json_file(kFixtures + "/grid_corpus.json"));
    const auto result = cli::run_evaluation(corpus);
    std::vector<ProgramOutcome> cached;
    for (const auto& r : result.programs) cached.push_back({r.trueCount, r.policyCount, r.variant.groundTruth});
    auto thresholds = default_roc_thresholds();
    thresholds.push_back(1.0 + 1e-9);
    const auto roc = roc_sweep(cached, thresholds);
    bool monotone = true;
    for (std::size_t k = 1; k < roc.size(); ++k) {
      monotone = monotone && *roc[k].tpr >= *roc[k - 1].tpr && *roc[k].fpr >= *roc[k - 1].fpr;
    }
    const bool low = *roc.front().fpr == 0.0 && *roc.front().tpr == 0.0;
    const bool high = *roc.back().fpr == 1.0 && *roc.back().tpr == 1.0;
    return Outcome{cached.size() == 12 && monotone && low && high,
                   std::to_string(cached.size()) + " programs, monotone=" + (monotone ? "yes" : "no") +
                       ", (0,0) at 0=" + (low ? "yes" : "no") + ", (1,1) above 1=" + (high ? "yes" : "no") +
                       ", corpus FP=" + std::to_string(result.confusion.fp)};
  });

  run_criterion(7, "determinism", [&] {
    const auto a = scratch / "det_a", b = scratch / "det_b";
    const auto config = kFixtures + "/grid_clean.json";
    const auto start = std::chrono::steady_clock::now();
    const int ca = run_cli({"test", "--config", config, "--out", a.string(), "--workers", "1"});
    const int cb = run_cli({"test", "--config", config, "--out", b.string(), "--workers", "4"});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool same = ca != 2 && ca == cb && slurp(a / "report.json") == slurp(b / "report.json") &&
                      !slurp(a / "report.json").empty();
    const bool fast = secs <= 2.0 * std::max(cleanSecs, 1e-3);
    return Outcome{same && fast, std::string("report.json ") + (same ? "byte-identical" : "DIFFERS") +
                                     " across two runs (1 and 4 workers)" + (fast ? "" : ", too slow")};
  });

  run_criterion(8, "external-trace path", [&] {
    const auto out = scratch / "analyze";
    std::string err;
    const int code = run_cli({"analyze", "--policy", kFixtures + "/analyze/policy.json", "--trace",
                          kFixtures + "/analyze/trace.jsonl", "--config", kFixtures + "/analyze/config.json",
                          "--out", out.string()},
                         &err);
    if (code == 2) return Outcome{false, "analyze failed: " + err};
    std::ifstream in(out / "analysis.json");
    const auto report = io::Json::parse(in);
    const auto series = report["runs"][0]["series"].get<std::vector<double>>();
    const bool exact = series == std::vector<double>{0.5 / 3.0, 2.0 / 3.0, 1.0};
    const bool verdict = report["verdict"] == "NonBuggy" && code == 0;
    return Outcome{exact && verdict, std::string("series ") + (exact ? "matches" : "DIFFERS from") +
                                         " [0.5/3, 2/3, 1], verdict " + report["verdict"].get<std::string>()};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
