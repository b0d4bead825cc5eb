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


// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails. Usage: acceptance DATA_DIR

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "baafe/behavior.h"
#include "baafe/client.h"
#include "baafe/crypto.h"
#include "baafe/error.h"
#include "baafe/experiment.h"
#include "baafe/extractor.h"
#include "baafe/random.h"
#include "baafe/reconstruct.h"
#include "baafe/security_estimate.h"
#include "baafe/services.h"
#include "baafe/synth.h"
#include "baafe/timing.h"
#include "baafe/vault.h"
#include "net_util.h"
#include "oracles.h"
#include "test_util.h"

namespace baafe {
namespace {

using Clock = std::chrono::steady_clock;
using ffmath::FieldElement;
using ffmath::KeyMaterial;
using thresholds::SchemeKind;

// Roles of the bundled fleet: a near-clone pair and a drifting application.
constexpr char kCloneTarget[] = "crm";
constexpr char kClone[] = "crm_dr";
constexpr char kDrifting[] = "ledger";

struct Verdict {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

KeyMaterial RandomKey(Rng& rng, size_t max_len) {
  Bytes b(1 + rng.UniformBelow(max_len));
  for (auto& x : b) x = static_cast<uint8_t>(rng.NextU64());
  return KeyMaterial::FromBytes(b);
}

size_t KeyCapacity(size_t d) { return 7 * (d + 1) - 2; }

// 1. Zero-noise round trip.
Verdict ZeroNoiseRoundTrip() {
  const auto start = Clock::now();
  Rng rng(1001);
  size_t ok = 0, window_redraws = 0, config_redraws = 0;
  for (int cfg = 0; cfg < 100;) {
    const size_t n = 8 + rng.UniformBelow(57);
    const size_t d = 2 + rng.UniformBelow(std::min<size_t>(47, n - 2));
    const size_t c = 10 + rng.UniformBelow(391);
    const auto key = RandomKey(rng, std::min<size_t>(64, KeyCapacity(d)));
    encoder::NormalizationParams norm;
    norm.min.assign(n, 0);
    norm.max.assign(n, 1);
    extractor::EnrollmentConfig ec;
    ec.sec = {n, c, d};
    bool enrolled = false;
    // A window whose codes collide below d + 1 distinct values has no valid
    // enrollment; draw another window for the same configuration.
    for (int attempt = 0; attempt < 20 && !enrolled; ++attempt) {
      behavior::FeatureVector fv;
      for (size_t i = 0; i < n; ++i) fv.values.push_back(rng.Uniform01());
      try {
        const auto res = extractor::EnrollBehavior("app", fv, norm, {}, key, ec, rng.NextU64());
        enrolled = true;
        const auto rep = extractor::AuthenticateFeatures(fv, res.vault, res.record,
                                                         {20000, rng.NextU64()});
        if (rep.outcome.success() && *rep.outcome.key == key) ++ok;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kTooFewDistinctCodes) throw;
        ++window_redraws;
      }
    }
    if (enrolled) {
      ++cfg;
    } else {
      ++config_redraws;
    }
  }
  const double secs = Seconds(start);
  return {ok == 100 && secs < 120,
          std::to_string(ok) + "/100 succeeded in " + Fmt("%.1f", secs) + " s (" +
              std::to_string(window_redraws) + " windows and " + std::to_string(config_redraws) +
              " configurations redrawn for TooFewDistinctCodes)"};
}

struct RandomEnrollment {
  vault::Vault v;
  KeyMaterial key;
  ffmath::Polynomial p;
  std::vector<ffmath::Point> genuine;
  std::vector<ffmath::Point> chaff;
};

RandomEnrollment EnrollRandom(Rng& rng, const thresholds::ThresholdScheme& scheme, size_t n,
                              size_t c, size_t d) {
  encoder::EncodedVector e;
  std::set<uint16_t> used;
  while (e.codes.size() < n) {
    const auto code = static_cast<uint16_t>(rng.UniformBelow(65536));
    if (used.insert(code).second) e.codes.push_back(code);
  }
  const auto key = RandomKey(rng, std::min<size_t>(64, KeyCapacity(d)));
  auto v = vault::Enroll("app", e, key, {n, c, d}, scheme, rng.NextU64());
  const auto p = ffmath::KeyToCoeffs(key, d);
  RandomEnrollment out{std::move(v), key, p, {}, {}};
  for (const auto& pt : out.v.points) {
    (ffmath::PolyEval(p, pt.x) == pt.y ? out.genuine : out.chaff).push_back({pt.x, pt.y});
  }
  return out;
}

// 2. Genuine-subset soundness.
Verdict SubsetSoundness() {
  Rng rng(2002);
  size_t genuine_ok = 0, genuine_trials = 0, chaff_trials = 0, chaff_matches = 0;
  for (int e = 0; e < 100; ++e) {
    const size_t n = 8 + rng.UniformBelow(57);
    const size_t d = 2 + rng.UniformBelow(std::min<size_t>(47, n - 2));
    const size_t c = 10 + rng.UniformBelow(391);
    const auto en = EnrollRandom(rng, thresholds::GlobalThreshold(), n, c, d);
    ffmath::Interpolator interp(d);
    std::vector<FieldElement> coeffs;
    std::vector<ffmath::Point> subset(d + 1);
    auto pick = [&](std::vector<ffmath::Point> pool, size_t k, size_t offset) {
      for (size_t i = 0; i < k; ++i) {
        const size_t j = i + rng.UniformBelow(pool.size() - i);
        std::swap(pool[i], pool[j]);
        subset[offset + i] = pool[i];
      }
    };
    for (int t = 0; t < 100; ++t) {
      pick(en.genuine, d + 1, 0);
      ++genuine_trials;
      const auto key = interp.Interpolate(subset, coeffs) ? ffmath::TryCoeffsToKey(coeffs)
                                                          : std::nullopt;
      genuine_ok += key && *key == en.key;
    }
    for (int t = 0; t < 1000; ++t) {
      const size_t k_chaff = 1 + rng.UniformBelow(std::min(d + 1, en.chaff.size()));
      pick(en.chaff, k_chaff, 0);
      pick(en.genuine, d + 1 - k_chaff, k_chaff);
      ++chaff_trials;
      if (!interp.Interpolate(subset, coeffs)) continue;
      const auto key = ffmath::TryCoeffsToKey(coeffs);
      chaff_matches += key && key->hash() == en.key.hash();
    }
  }
  return {genuine_ok == genuine_trials && chaff_matches == 0 && chaff_trials >= 100000,
          std::to_string(genuine_ok) + "/" + std::to_string(genuine_trials) +
              " genuine subsets recovered the key; " + std::to_string(chaff_matches) +
              " hash matches over " + std::to_string(chaff_trials) + " chaff-containing subsets"};
}

// 3. Chaff invariants.
Verdict ChaffInvariants() {
  Rng rng(3003);
  std::map<SchemeKind, size_t> checked;
  size_t violations = 0;
  for (int round = 0; checked.size() < 3 || std::any_of(checked.begin(), checked.end(), [](auto& kv) {
                        return kv.second < 4000;
                      });
       ++round) {
    const SchemeKind kind = static_cast<SchemeKind>(round % 3);
    const size_t n = 8 + rng.UniformBelow(49);
    const size_t d = 2 + rng.UniformBelow(std::min<size_t>(30, n - 2));
    const size_t c = 10 + rng.UniformBelow(391);
    std::vector<double> taus(n);
    for (auto& t : taus) t = rng.Uniform(0.5, 400);
    const auto scheme = kind == SchemeKind::kGlobal   ? thresholds::GlobalThreshold(taus[0])
                        : kind == SchemeKind::kPerApp ? thresholds::ThresholdScheme(thresholds::PerApp{taus[0]})
                                                      : thresholds::ThresholdScheme(thresholds::PerFeature{taus});
    const auto en = EnrollRandom(rng, scheme, n, kind == SchemeKind::kPerFeature ? std::max<size_t>(c / 20, 1) : c, d);
    // Genuine centers per label (a single shared set outside PerFeature).
    std::map<int64_t, std::vector<uint64_t>> centers;
    for (const auto& pt : en.v.points) {
      if (ffmath::PolyEval(en.p, pt.x) == pt.y) {
        centers[pt.label ? int64_t{*pt.label} : -1].push_back(pt.x.value());
      }
    }
    for (const auto& pt : en.v.points) {
      if (ffmath::PolyEval(en.p, pt.x) == pt.y) continue;  // on P: genuine by construction
      ++checked[kind];
      const int64_t label = pt.label ? int64_t{*pt.label} : -1;
      const double tau = pt.label ? taus[*pt.label] : taus[0];
      for (uint64_t g : centers[label]) {
        if (std::abs(static_cast<double>(pt.x.value()) - static_cast<double>(g)) <= tau) {
          ++violations;
        }
      }
    }
    // Every vault point off P is chaff; count them against the expected size
    // so a chaff point landing on P would show up as a shortfall.
    const size_t expected_chaff = kind == SchemeKind::kPerFeature ? n * en.v.sec.c : en.v.sec.c;
    size_t off = 0;
    for (const auto& pt : en.v.points) off += ffmath::PolyEval(en.p, pt.x) != pt.y;
    if (off != expected_chaff) violations += expected_chaff - off;
  }
  size_t total = 0;
  std::string per;
  for (const auto& [k, v] : checked) {
    total += v;
    per += (per.empty() ? "" : ", ") + thresholds::SchemeKindName(k) + " " + std::to_string(v);
  }
  return {violations == 0 && total >= 10000,
          std::to_string(violations) + " violations over " + std::to_string(total) +
              " chaff points (" + per + ")"};
}

// 4. Security estimator against the attack oracles.
Verdict EstimatorOracles() {
  const auto e = eval::EstimateBruteForce({5, 10, 2}, SchemeKind::kGlobal);
  const double corrected = eval::ToDouble(*e.corrected_expected_attempts);
  const auto mc = eval::MonteCarloAttack(eval::BuildAttackVault(5, 10, 2, 4004), 1000, 4005);
  const auto exhaustive = eval::ExhaustiveAttackMean(eval::BuildAttackVault(3, 1, 2, 4006));
  const bool mc_ok = std::abs(mc.mean_attempts - corrected) <= 0.1 * corrected &&
                     *e.corrected_expected_attempts == eval::BigRational(456, 11);
  const bool ex_ok = exhaustive == eval::BigRational(5, 2);
  const bool paper_ok = e.paper_expected_attempts == eval::BigRational(455, 2);
  return {mc_ok && ex_ok && paper_ok,
          "Monte Carlo mean " + Fmt("%.2f", mc.mean_attempts) + " vs (N+1)/(K+1) = " +
              eval::FormatExact(*e.corrected_expected_attempts) + " = " + Fmt("%.2f", corrected) +
              "; exhaustive (3,1,2) = " + eval::FormatExact(exhaustive) +
              "; half-space formula (5,10,2) = " + eval::FormatExact(e.paper_expected_attempts)};
}

// 5. Default-parameter combinatorics.
Verdict DefaultCombinatorics(double seconds_per_attempt) {
  eval::BigInt num = 1, den = 1;
  for (int i = 0; i < 33; ++i) {
    num *= 256 - i;
    den *= i + 1;
  }
  const eval::BigRational want(num / den, 2);
  const auto e = eval::EstimateBruteForce({56, 200, 32}, SchemeKind::kGlobal);
  const double years = eval::YearsForAttempts(e.paper_expected_attempts, seconds_per_attempt);
  return {num % den == 0 && e.paper_expected_attempts == want,
          "C(256,33)/2 = " + eval::FormatScientific(e.paper_expected_attempts) + " (exact, " +
              std::to_string(eval::FormatExact(e.paper_expected_attempts).size()) +
              " chars); at " + Fmt("%.3g", seconds_per_attempt * 1e6) +
              " us/attempt this is " + Fmt("%.3g", years) + " years"};
}

// 6. Timing trends.
Verdict TimingTrends(const eval::TimingReport& r) {
  std::vector<double> fails;
  std::string fail_list;
  for (const auto& s : r.failed_auth_by_degree) {
    fails.push_back(s.mean_ms);
    fail_list += (fail_list.empty() ? "" : ", ") + std::string("d=") + std::to_string(s.param) +
                 ":" + Fmt("%.0f", s.mean_ms);
  }
  const bool a = r.enroll_fit.slope > 0 && r.enroll_fit.r2 > 0.9;
  const bool b = eval::NonDecreasing(fails);
  const bool c = r.success_auth_default_ms < 1000;
  return {a && b && c,
          std::string("(a) ") + (a ? "ok" : "FAIL") + " enroll slope " +
              Fmt("%.4f", r.enroll_fit.slope) + " ms/chaff, R^2 " + Fmt("%.4f", r.enroll_fit.r2) +
              "; (b) " + (b ? "ok" : "FAIL") + " failed auth ms " + fail_list + "; (c) " +
              (c ? "ok" : "FAIL") + " success at defaults " +
              Fmt("%.2f", r.success_auth_default_ms) + " ms"};
}

// 7. Accuracy properties on the bundled synthetic fleet.
Verdict FleetAccuracy(const std::string& data_dir) {
  eval::ExperimentConfig base;
  base.profiles = data_dir + "/fleet10_profiles.json";
  base.days = 30;
  base.seeds = {1};
  base.chaff_counts = {200};
  const auto dataset = eval::LoadDataset(base);
  const auto data = eval::Prepare(dataset, base);
  std::vector<std::string> notes;
  bool pass = true;
  auto note = [&](bool ok, const std::string& s) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok " : "FAIL ") + s);
  };

  // (a) tau sweep at the default degree.
  auto cfg = base;
  cfg.degrees = {32};
  cfg.taus = {5, 25, 50, 100};
  std::map<std::string, std::vector<eval::MetricsRow>> by_app;
  for (auto& row : eval::Sweep(data, cfg)) by_app[row.point.app].push_back(row);
  bool mono = true;
  for (auto& [app, rows] : by_app) {
    std::sort(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.point.tau < y.point.tau; });
    for (size_t i = 1; i < rows.size(); ++i) {
      const auto f0 = rows[i - 1].frr.value(), f1 = rows[i].frr.value();
      const auto a0 = rows[i - 1].far.value(), a1 = rows[i].far.value();
      if (f0 && f1 && *f1 > *f0) mono = false;
      if (a0 && a1 && *a1 < *a0) mono = false;
    }
  }
  note(mono, "(a) FRR non-increasing and FAR non-decreasing over tau {5,25,50,100} for all apps");

  // (b), (c): degree sweep at the default tau.
  cfg = base;
  cfg.degrees = {8, 24, 40, 48};
  std::map<std::pair<std::string, size_t>, eval::MetricsRow> rows;
  for (auto& row : eval::Sweep(data, cfg)) rows.emplace(std::make_pair(row.point.app, row.point.degree), row);
  bool b_order = true, b_zero = true;
  std::string nonzero;
  for (const auto& [app, fvs] : data.windows) {
    const auto far8 = rows.at({app, 8}).far.value();
    const auto far40 = rows.at({app, 40}).far.value();
    if (far8 && far40 && *far40 > *far8) b_order = false;
    const bool separated = app != kCloneTarget && app != kClone;
    if (separated && (!far40 || *far40 != 0)) {
      b_zero = false;
      nonzero += " " + app;
    }
  }
  note(b_order, "(b) FAR(d=40) <= FAR(d=8) for every target");
  note(b_zero, "(b) FAR = 0 at d=40 for the 8 well-separated apps" +
                   (nonzero.empty() ? std::string() : " (nonzero:" + nonzero + ")"));

  const auto& twin24 = rows.at({kCloneTarget, 24});
  const bool only_clone = twin24.false_acceptors.size() == 1 && twin24.false_acceptors.count(kClone);
  std::string acceptors;
  for (const auto& [a, k] : twin24.false_acceptors) acceptors += " " + a + "x" + std::to_string(k);
  note(only_clone, std::string("(c) d=24 false acceptors of ") + kCloneTarget + ":" +
                       (acceptors.empty() ? " none" : acceptors));
  const auto& twin48 = rows.at({kCloneTarget, 48});
  const bool gone = twin48.enroll_failures == 0 && twin48.far.value() && *twin48.far.value() == 0;
  note(gone, std::string("(c) d=48 FAR of ") + kCloneTarget + " = " +
                 (twin48.far.value() ? Fmt("%.3f", *twin48.far.value()) : std::string("NA")) +
                 ", enroll failures " + std::to_string(twin48.enroll_failures));

  // (d) drifting app with and without 5-day re-enrollment.
  cfg = base;
  cfg.apps = {kDrifting};
  cfg.degrees = {32};
  const auto stale = eval::Sweep(data, cfg).at(0);
  cfg.reenroll_every = 5;
  const auto fresh = eval::Sweep(data, cfg).at(0);
  const bool d_ok = stale.frr.value() && *stale.frr.value() > 0 && fresh.frr.value() &&
                    *fresh.frr.value() == 0;
  note(d_ok, std::string("(d) ") + kDrifting + " FRR " + Fmt("%.3f", stale.frr.value().value_or(-1)) +
                 " -> " + Fmt("%.3f", fresh.frr.value().value_or(-1)) + " with 5-day re-enrollment");

  std::string detail;
  for (const auto& s : notes) detail += "\n      " + s;
  return {pass, detail};
}

// 8. Protocol integration over real sockets.
Verdict ProtocolIntegration(const std::string& data_dir) {
  using protocol::AuthServer;
  using protocol::FeService;
  testing_util::TempDir dir;
  {
    std::ofstream out(dir.File("fleet.jsonl"));
    behavior::WriteJsonl(behavior::SynthGenerate(behavior::LoadProfiles(data_dir + "/fleet10_profiles.json"), 30), out);
  }
  protocol::FeOptions fo;
  fo.bind = {"127.0.0.1", 0};
  fo.store = dir.File("fe.json");
  fo.data = dir.File("fleet.jsonl");
  fo.seed = 8008;
  testing_util::Running<FeService> fe(fo);
  testing_util::RecordingProxy fe_leg(fe->port());
  protocol::ServerOptions so;
  so.bind = {"127.0.0.1", 0};
  so.store = dir.File("registry.json");
  so.fe = fe_leg.endpoint();
  testing_util::Running<AuthServer> server(so);
  testing_util::RecordingProxy client_leg(server->port());
  const auto ep = client_leg.endpoint();
  const std::string app = "billing";

  std::vector<std::string> notes;
  bool pass = true;
  auto note = [&](bool ok, const std::string& s) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok " : "FAIL ") + s);
  };

  protocol::EnrollParams params;
  params.sec = {56, 200, 32};
  auto v = protocol::ClientEnroll(ep, app, params);
  vault::SaveVault(v, dir.File("vault.json"));
  note(protocol::ClientAuthenticate(ep, app, vault::LoadVault(dir.File("vault.json"))),
       "enroll then authenticate accepted");

  // Re-enroll at d = n_distinct - 1 so that every interpolation uses every
  // genuine point; the fixed extractor seed keeps the encoding unchanged.
  const auto store = nlohmann::json::parse(testing_util::ReadFile(dir.File("fe.json")));
  const auto record = extractor::FeRecordFromJson(store.at("records").at(app));
  const auto series = behavior::Ingest(fo.data).at(app);
  const auto fv = behavior::WindowFeatures(behavior::SlideWindows(app, series).back());
  const auto codes = encoder::Encode(encoder::Normalize(fv, record.normalization), record.encoder);
  const std::set<uint64_t> distinct(codes.codes.begin(), codes.codes.end());
  params.sec.d = distinct.size() - 1;
  params.force = true;
  v = protocol::ClientEnroll(ep, app, params);
  const bool tight_ok = protocol::ClientAuthenticate(ep, app, v);
  auto tampered = v;
  for (auto& pt : tampered.points) {
    if (distinct.count(pt.x.value())) {
      pt.y += FieldElement(1);
      break;
    }
  }
  const bool one_rejected = !protocol::ClientAuthenticate(ep, app, tampered);
  auto all = v;
  for (auto& pt : all.points) {
    if (distinct.count(pt.x.value())) pt.y += FieldElement(1);
  }
  const bool all_rejected = !protocol::ClientAuthenticate(ep, app, all);
  note(tight_ok && one_rejected && all_rejected,
       "tampered vault rejected (d=" + std::to_string(params.sec.d) +
           ", one genuine y flipped; every genuine y flipped)");

  ErrorCode unknown = ErrorCode::kIo;
  try {
    auto other = v;
    other.app_id = "no-such-app";
    protocol::ClientAuthenticate(ep, "no-such-app", other);
  } catch (const Error& e) {
    unknown = e.code();
  }
  note(unknown == ErrorCode::kUnknownApp, "unknown app rejected with UnknownApp");

  const std::string inner = fe_leg.Recorded();
  std::set<std::string> keys;
  const std::string marker = "\"key_hex\":\"";
  for (size_t at = inner.find(marker); at != std::string::npos; at = inner.find(marker, at + 1)) {
    keys.insert(inner.substr(at + marker.size(), 64));
  }
  const std::vector<std::string> client_visible = {
      client_leg.Recorded(), testing_util::ReadFile(dir.File("vault.json")),
      protocol::VaultToWire(v).dump(), testing_util::ReadFile(dir.File("registry.json"))};
  size_t hits = 0;
  for (const auto& hex : keys) {
    const auto raw = FromHex(hex);
    std::string upper = hex;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    for (const auto& h : client_visible) {
      hits += h.find(hex) != std::string::npos;
      hits += h.find(upper) != std::string::npos;
      hits += raw && h.find(std::string(raw->begin(), raw->end())) != std::string::npos;
    }
  }
  note(keys.size() == 2 && hits == 0,
       std::to_string(keys.size()) + " keys seen on the server-extractor leg; " +
           std::to_string(hits) + " occurrences in " + std::to_string(client_leg.Recorded().size()) +
           " client-visible bytes, vault files and the registry");

  std::string detail;
  for (const auto& s : notes) detail += "\n      " + s;
  return {pass, detail};
}

// 9. Encoder against the straight-line oracle.
Verdict EncoderDualImplementation() {
  Rng rng(9009);
  size_t match = 0;
  for (int t = 0; t < 1000; ++t) {
    const size_t n = 1 + rng.UniformBelow(64);
    const auto p = encoder::GenerateEncoderParams(rng.NextU64(), n);
    std::vector<double> v(n);
    for (auto& x : v) x = t % 10 == 0 ? static_cast<double>(rng.UniformBelow(2)) : rng.Uniform01();
    match += encoder::Encode(v, p).codes == oracle::StraightLineEncode(v, p);
  }
  return {match == 1000, std::to_string(match) + "/1000 inputs encoded identically"};
}

}  // namespace
}  // namespace baafe

int main(int argc, char** argv) {
  using namespace baafe;
  const std::string data_dir = argc > 1 ? argv[1] : "data";
  auto run = [](const std::function<Verdict()>& fn) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    v.detail += " [" + Fmt("%.1f", Seconds(start)) + " s]";
    return v;
  };

  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;
  std::optional<eval::TimingReport> timing;
  auto get_timing = [&]() -> const eval::TimingReport& {
    if (!timing) timing = eval::MeasureTiming(eval::TimingConfig{});
    return *timing;
  };
  criteria.emplace_back("zero-noise round trip", ZeroNoiseRoundTrip);
  criteria.emplace_back("genuine-subset soundness", SubsetSoundness);
  criteria.emplace_back("chaff invariants", ChaffInvariants);
  criteria.emplace_back("security estimator vs oracles", EstimatorOracles);
  criteria.emplace_back("default-parameter combinatorics",
                        [&] { return DefaultCombinatorics(get_timing().seconds_per_attempt); });
  criteria.emplace_back("timing trends", [&] { return TimingTrends(get_timing()); });
  criteria.emplace_back("synthetic accuracy properties", [&] { return FleetAccuracy(data_dir); });
  criteria.emplace_back("protocol integration", [&] { return ProtocolIntegration(data_dir); });
  criteria.emplace_back("encoder dual implementation", EncoderDualImplementation);

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const Verdict v = run(criteria[i].second);
    failed += !v.pass;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
