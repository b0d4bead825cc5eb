// Copyright 2026 The BAAFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: protocol roles and clients, data generation,
// evaluation sweeps and security estimates.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "baafe/client.h"
#include "baafe/error.h"
#include "baafe/experiment.h"
#include "baafe/security_estimate.h"
#include "baafe/services.h"
#include "baafe/synth.h"
#include "baafe/timing.h"

namespace {

using namespace baafe;
using nlohmann::json;

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop = true; }

void InstallSignalHandlers() {
  struct sigaction sa {};
  sa.sa_handler = OnSignal;
  sigemptyset(&sa.sa_mask);
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
}

struct ServeArgs {
  std::string role;
  std::string bind;
  std::string store;
  std::string data;
  std::string fe;
  int64_t seed = -1;
  size_t max_attempts = reconstruct::kDefaultMaxAttempts;
};

int RunServe(const ServeArgs& a) {
  InstallSignalHandlers();
  const auto bind = protocol::ParseEndpoint(a.bind);
  if (a.role == "server") {
    if (a.fe.empty()) throw Error(ErrorCode::kInvalidConfig, "--fe is required for role server");
    protocol::AuthServer server({bind, a.store, protocol::ParseEndpoint(a.fe)});
    std::fprintf(stderr, "server listening on %s:%u\n", bind.host.c_str(), server.port());
    server.Serve(g_stop);
  } else {
    if (a.data.empty()) throw Error(ErrorCode::kInvalidConfig, "--data is required for role fe");
    protocol::FeOptions opts;
    opts.bind = bind;
    opts.store = a.store;
    opts.data = a.data;
    if (a.seed >= 0) opts.seed = static_cast<uint64_t>(a.seed);
    opts.max_attempts = a.max_attempts;
    protocol::FeService fe(std::move(opts));
    std::fprintf(stderr, "fe listening on %s:%u\n", bind.host.c_str(), fe.port());
    fe.Serve(g_stop);
  }
  return 0;
}

struct EnrollArgs {
  std::string app;
  std::string server;
  std::string out;
  protocol::EnrollParams params;
  std::string scheme = "global";
};

int RunEnroll(EnrollArgs a) {
  a.params.thresholds.kind = thresholds::ParseSchemeKind(a.scheme);
  const auto v = protocol::ClientEnroll(protocol::ParseEndpoint(a.server), a.app, a.params);
  vault::SaveVault(v, a.out);
  std::printf("enrolled %s: %zu vault points written to %s\n", a.app.c_str(), v.points.size(),
              a.out.c_str());
  return 0;
}

int RunAuth(const std::string& app, const std::string& vault_path, const std::string& server) {
  const auto v = vault::LoadVault(vault_path);
  const bool ok = protocol::ClientAuthenticate(protocol::ParseEndpoint(server), app, v);
  std::printf("%s %s\n", app.c_str(), ok ? "accepted" : "rejected");
  return ok ? 0 : 1;
}

int RunEvaluate(const std::string& config_path, const std::string& out, size_t threads) {
  auto config = eval::LoadConfig(config_path);
  if (threads) config.threads = threads;
  const auto data = eval::Prepare(eval::LoadDataset(config), config);
  const auto rows = eval::Sweep(data, config);
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + out);
  eval::WriteCsv(rows, f, config.record_timing);
  std::printf("%zu rows written to %s\n", rows.size(), out.c_str());
  return 0;
}

struct EstimateArgs {
  size_t n = 56, c = 200, d = 32;
  std::string scheme = "global";
  std::string per_feature;
  uint64_t n_distinct = 0;
  double seconds_per_attempt = 0;
  bool measure = false;
};

int RunEstimate(const EstimateArgs& a) {
  const auto kind = thresholds::ParseSchemeKind(a.scheme);
  std::vector<eval::FeatureCounts> counts;
  if (!a.per_feature.empty()) {
    std::ifstream in(a.per_feature);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + a.per_feature);
    json j;
    try {
      j = json::parse(in);
      for (const auto& e : j) {
        counts.push_back({e.at("genuine").get<uint64_t>(), e.at("chaff").get<uint64_t>()});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidConfig, a.per_feature + ": " + e.what());
    }
  }
  const vault::SecurityParams sec{a.n, a.c, a.d};
  const auto est = eval::EstimateBruteForce(sec, kind, counts, a.n_distinct);
  json out = {{"n", a.n},
              {"c", a.c},
              {"d", a.d},
              {"scheme", a.scheme},
              {"total_subsets", est.total_subsets.str()},
              {"valid_subsets", est.valid_subsets.str()},
              {"paper_expected_attempts", eval::FormatExact(est.paper_expected_attempts)},
              {"paper_expected_attempts_sci", eval::FormatScientific(est.paper_expected_attempts)},
              {"reachable", est.reachable()}};
  if (est.reachable()) {
    out["corrected_expected_attempts"] = eval::FormatExact(*est.corrected_expected_attempts);
    out["corrected_expected_attempts_sci"] =
        eval::FormatScientific(*est.corrected_expected_attempts);
  } else {
    out["corrected_expected_attempts"] = "unreachable";
  }
  double spa = a.seconds_per_attempt;
  if (a.measure && spa <= 0) {
    eval::TimingConfig tc;
    tc.n = a.n;
    tc.c = a.c;
    tc.d = a.d;
    tc.chaff_counts = {};
    tc.degrees = {};
    tc.repetitions = 1;
    spa = eval::MeasureTiming(tc).seconds_per_attempt;
  }
  if (spa > 0) {
    out["seconds_per_attempt"] = spa;
    out["years_paper_formula"] = eval::YearsForAttempts(est.paper_expected_attempts, spa);
    if (est.reachable()) {
      out["years_corrected"] = eval::YearsForAttempts(*est.corrected_expected_attempts, spa);
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int RunGenData(const std::string& profiles, size_t days, const std::string& out) {
  const auto dataset = behavior::SynthGenerate(behavior::LoadProfiles(profiles), days);
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + out);
  behavior::WriteJsonl(dataset, f);
  std::printf("%zu apps x %zu days written to %s\n", dataset.size(), days, out.c_str());
  return 0;
}

int RunTiming(eval::TimingConfig tc, const std::string& out) {
  const auto r = eval::MeasureTiming(tc);
  json j;
  for (const auto& s : r.enroll_by_chaff) j["enroll_ms_by_chaff"][std::to_string(s.param)] = s.mean_ms;
  j["enroll_fit"] = {{"slope_ms_per_chaff", r.enroll_fit.slope},
                     {"intercept_ms", r.enroll_fit.intercept},
                     {"r2", r.enroll_fit.r2}};
  for (const auto& s : r.failed_auth_by_degree) {
    j["failed_auth_ms_by_degree"][std::to_string(s.param)] = s.mean_ms;
  }
  for (const auto& s : r.success_auth_by_degree) {
    j["success_auth_ms_by_degree"][std::to_string(s.param)] = s.mean_ms;
  }
  j["success_auth_default_ms"] = r.success_auth_default_ms;
  j["failed_auth_default_ms"] = r.failed_auth_default_ms;
  j["seconds_per_attempt"] = r.seconds_per_attempt;
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out);
    f << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior-bound fuzzy-vault authentication toolkit"};
  app.require_subcommand(1);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the authentication server or extractor");
  serve_cmd->add_option("--role", serve.role, "server or fe")
      ->required()
      ->check(CLI::IsMember({"server", "fe"}));
  serve_cmd->add_option("--bind", serve.bind, "HOST:PORT to listen on")->required();
  serve_cmd->add_option("--store", serve.store, "Store file (registry or extractor records)")
      ->required();
  serve_cmd->add_option("--data", serve.data, "Behavior JSONL (fe role)");
  serve_cmd->add_option("--fe", serve.fe, "Extractor HOST:PORT (server role)");
  serve_cmd->add_option("--seed", serve.seed, "Fix per-app enrollment seeds (fe role)");
  serve_cmd->add_option("--max-attempts", serve.max_attempts, "Reconstruction attempt cap");

  EnrollArgs enroll;
  auto* enroll_cmd = app.add_subcommand("enroll", "Enroll an application and save its vault");
  enroll_cmd->add_option("--app", enroll.app, "Application id")->required();
  enroll_cmd->add_option("--server", enroll.server, "Server HOST:PORT")->required();
  enroll_cmd->add_option("--out", enroll.out, "Vault output path")->required();
  enroll_cmd->add_option("--n", enroll.params.sec.n, "Feature count")->capture_default_str();
  enroll_cmd->add_option("--c", enroll.params.sec.c, "Chaff points")->capture_default_str();
  enroll_cmd->add_option("--d", enroll.params.sec.d, "Polynomial degree")->capture_default_str();
  enroll_cmd->add_option("--scheme", enroll.scheme, "global, per_app or per_feature")
      ->capture_default_str();
  enroll_cmd->add_option("--tau", enroll.params.thresholds.tau, "Global threshold")
      ->capture_default_str();
  enroll_cmd->add_option("--divisor", enroll.params.thresholds.divisor,
                         "Calibration divisor (0 = scheme default)");
  enroll_cmd->add_flag("--force", enroll.params.force, "Replace an existing enrollment");

  std::string auth_app, auth_vault, auth_server;
  auto* auth_cmd = app.add_subcommand("auth", "Authenticate with a vault; exit 0 iff accepted");
  auth_cmd->add_option("--app", auth_app, "Application id")->required();
  auth_cmd->add_option("--vault", auth_vault, "Vault file")->required();
  auth_cmd->add_option("--server", auth_server, "Server HOST:PORT")->required();

  std::string eval_config, eval_out;
  size_t eval_threads = 0;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run a FAR/FRR sweep to CSV");
  eval_cmd->add_option("--config", eval_config, "Experiment config JSON")->required();
  eval_cmd->add_option("--out", eval_out, "CSV output path")->required();
  eval_cmd->add_option("--threads", eval_threads, "Worker threads (default: config)");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate-security", "Brute-force cost estimate");
  est_cmd->add_option("--n", est.n)->capture_default_str();
  est_cmd->add_option("--c", est.c)->capture_default_str();
  est_cmd->add_option("--d", est.d)->capture_default_str();
  est_cmd->add_option("--scheme", est.scheme)->capture_default_str();
  est_cmd->add_option("--per-feature", est.per_feature,
                      "JSON array of {genuine, chaff} per feature");
  est_cmd->add_option("--n-distinct", est.n_distinct, "Distinct genuine points (default n)");
  est_cmd->add_option("--seconds-per-attempt", est.seconds_per_attempt,
                      "Attempt latency for the years figure");
  est_cmd->add_flag("--measure", est.measure, "Measure attempt latency on this machine");

  std::string gen_profiles, gen_out;
  size_t gen_days = 30;
  auto* gen_cmd = app.add_subcommand("gen-data", "Synthesize behavior data from profiles");
  gen_cmd->add_option("--profiles", gen_profiles, "Profiles JSON")->required();
  gen_cmd->add_option("--days", gen_days, "Days per series")->capture_default_str();
  gen_cmd->add_option("--out", gen_out, "JSONL output path")->required();

  eval::TimingConfig tc;
  std::string timing_out;
  auto* timing_cmd = app.add_subcommand("timing", "Measure enrollment and authentication time");
  timing_cmd->add_option("--repetitions", tc.repetitions)->capture_default_str();
  timing_cmd->add_option("--seed", tc.seed)->capture_default_str();
  timing_cmd->add_option("--out", timing_out, "JSON output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return RunServe(serve);
    if (*enroll_cmd) return RunEnroll(enroll);
    if (*auth_cmd) return RunAuth(auth_app, auth_vault, auth_server);
    if (*eval_cmd) return RunEvaluate(eval_config, eval_out, eval_threads);
    if (*est_cmd) return RunEstimate(est);
    if (*gen_cmd) return RunGenData(gen_profiles, gen_days, gen_out);
    if (*timing_cmd) return RunTiming(tc, timing_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
