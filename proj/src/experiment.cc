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

#include "baafe/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "baafe/error.h"
#include "baafe/key_codec.h"
#include "baafe/random.h"
#include "baafe/synth.h"

namespace baafe::eval {
namespace {

using nlohmann::json;
using thresholds::SchemeKind;

[[noreturn]] void Invalid(const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); }

std::string NormalizationScopeName(NormalizationScope s) {
  return s == NormalizationScope::kFleet ? "fleet" : "app";
}

NormalizationScope ParseNormalizationScope(const std::string& s) {
  if (s == "fleet") return NormalizationScope::kFleet;
  if (s == "app") return NormalizationScope::kApp;
  Invalid("normalization_scope must be \"fleet\" or \"app\", got \"" + s + "\"");
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, end) : "NA";
}

std::string FormatOptional(const std::optional<double>& v) { return v ? FormatNumber(*v) : "NA"; }

double Ms(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

struct Enrolled {
  bool ok = false;
  vault::Vault vault;
  extractor::FeRecord record;
  uint64_t seed = 0;
};

// Shared driver for EvalFrr, EvalFar and EvaluatePoint.
MetricsRow Run(const PreparedData& data, const ExperimentConfig& config, const GridPoint& point,
               bool genuine, bool impostors) {
  auto target_it = data.windows.find(point.app);
  if (target_it == data.windows.end()) Invalid("unknown app '" + point.app + "'");
  const auto& own = target_it->second;
  if (own.size() < config.auth_windows + 1) {
    throw Error(ErrorCode::kInsufficientData,
                "app '" + point.app + "' has " + std::to_string(own.size()) +
                    " windows, need enrollment plus " + std::to_string(config.auth_windows));
  }

  MetricsRow row;
  row.point = point;
  double enroll_ms = 0;
  size_t enrollments = 0;
  double success_ms = 0, fail_ms = 0;
  size_t successes = 0, failures = 0;

  extractor::EnrollmentConfig ecfg;
  ecfg.sec = {own[0].values.size(), point.chaff, point.degree};
  ecfg.thresholds = {point.scheme, point.tau, point.divisor};

  for (uint64_t seed : config.seeds) {
    for (size_t rep = 0; rep < config.repetitions; ++rep) {
      const uint64_t run_seed = DeriveSeed(DeriveSeed(seed, point.app), rep);
      std::map<size_t, Enrolled> enrolled;
      auto enrollment_for = [&](size_t window) -> const Enrolled& {
        const size_t idx = config.reenroll_every
                               ? config.reenroll_every * (window / config.reenroll_every)
                               : 0;
        auto it = enrolled.find(idx);
        if (it != enrolled.end()) return it->second;
        Enrolled e;
        e.seed = DeriveSeed(run_seed, idx);
        Rng key_rng(DeriveSeed(e.seed, "key"));
        Bytes key_bytes(config.key_bytes);
        for (auto& b : key_bytes) b = static_cast<uint8_t>(key_rng.UniformBelow(256));
        const auto key = ffmath::KeyMaterial::FromBytes(std::move(key_bytes));
        const auto start = std::chrono::steady_clock::now();
        try {
          auto res = extractor::EnrollBehavior(point.app, own[idx],
                                               data.normalization.at(point.app), own, key, ecfg,
                                               e.seed);
          e.vault = std::move(res.vault);
          e.record = std::move(res.record);
          e.ok = true;
        } catch (const Error& err) {
          if (err.code() != ErrorCode::kTooFewDistinctCodes &&
              err.code() != ErrorCode::kZeroSpread &&
              err.code() != ErrorCode::kChaffSpaceExhausted) {
            throw;
          }
          ++row.enroll_failures;
        }
        enroll_ms += Ms(std::chrono::steady_clock::now() - start);
        ++enrollments;
        return enrolled.emplace(idx, std::move(e)).first->second;
      };

      auto probe = [&](const std::string& app, size_t t, const behavior::FeatureVector& fv) {
        const Enrolled& e = enrollment_for(t);
        if (!e.ok) return false;
        extractor::AuthOptions opts{config.max_attempts,
                                    DeriveSeed(e.seed, "auth/" + app + "/" + std::to_string(t))};
        const auto report = extractor::AuthenticateFeatures(fv, e.vault, e.record, opts);
        const bool ok = report.outcome.success();
        row.total_attempts_used += report.outcome.attempts_used;
        row.max_attempts_used = std::max(row.max_attempts_used, report.outcome.attempts_used);
        ++row.auth_count;
        if (ok) {
          success_ms += report.elapsed_ms;
          ++successes;
        } else {
          fail_ms += report.elapsed_ms;
          ++failures;
        }
        return ok;
      };

      for (size_t t = 1; t <= config.auth_windows; ++t) {
        if (genuine) {
          ++row.frr.attempts;
          if (!probe(point.app, t, own[t])) ++row.frr.events;
        }
        if (!impostors) continue;
        for (const auto& [other, windows] : data.windows) {
          if (other == point.app || windows.size() <= t) continue;
          ++row.far.attempts;
          if (probe(other, t, windows[t])) {
            ++row.far.events;
            ++row.false_acceptors[other];
          }
        }
      }
    }
  }
  row.mean_enroll_ms = enrollments ? enroll_ms / static_cast<double>(enrollments) : 0;
  if (successes) row.mean_auth_success_ms = success_ms / static_cast<double>(successes);
  if (failures) row.mean_auth_fail_ms = fail_ms / static_cast<double>(failures);
  return row;
}

auto Coordinates(const GridPoint& p) {
  return std::make_tuple(p.app, static_cast<int>(p.scheme), p.tau, p.divisor, p.degree, p.chaff);
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (dataset.empty() == profiles.empty()) Invalid("exactly one of dataset, profiles is required");
  if (!profiles.empty() && days < behavior::kDefaultWindowDays) {
    Invalid("days must be at least " + std::to_string(behavior::kDefaultWindowDays));
  }
  if (degrees.empty() || chaff_counts.empty() || schemes.empty() || taus.empty() ||
      divisors.empty() || seeds.empty()) {
    Invalid("degrees, chaff_counts, schemes, taus, divisors and seeds must be nonempty");
  }
  if (repetitions == 0 || auth_windows == 0 || max_attempts == 0) {
    Invalid("repetitions, auth_windows and max_attempts must be positive");
  }
  if (key_bytes == 0 || key_bytes > ffmath::kMaxKeyBytes) {
    Invalid("key_bytes must be in [1, " + std::to_string(ffmath::kMaxKeyBytes) + "]");
  }
  for (size_t d : degrees) {
    if (d == 0) Invalid("degrees must be positive");
    if (ffmath::MinDegreeForKey(key_bytes) > d) {
      Invalid("degree " + std::to_string(d) + " cannot carry a " + std::to_string(key_bytes) +
              "-octet key");
    }
  }
  for (size_t c : chaff_counts) {
    if (c == 0) Invalid("chaff_counts must be positive");
  }
  for (double t : taus) {
    if (!(t > 0)) Invalid("taus must be positive");
  }
  for (double d : divisors) {
    if (!(d >= 0)) Invalid("divisors must be nonnegative");
  }
}

ExperimentConfig ConfigFromJson(const json& j, const std::string& base_dir) {
  if (!j.is_object()) Invalid("config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "dataset",      "profiles",       "days",           "apps",
      "degrees",      "chaff_counts",   "schemes",        "taus",
      "divisors",     "seeds",          "repetitions",    "auth_windows",
      "max_attempts", "reenroll_every", "normalization",  "normalization_scope",
      "key_bytes",    "record_timing",  "threads"};
  for (const auto& [k, v] : j.items()) {
    if (!kKnown.count(k)) Invalid("unknown config field '" + k + "'");
  }
  auto resolve = [&](const std::string& p) {
    if (p.empty() || base_dir.empty() || std::filesystem::path(p).is_absolute()) return p;
    return (std::filesystem::path(base_dir) / p).string();
  };
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) c.dataset = resolve(j["dataset"].get<std::string>());
    if (j.contains("profiles")) c.profiles = resolve(j["profiles"].get<std::string>());
    if (j.contains("days")) c.days = j["days"].get<size_t>();
    if (j.contains("apps")) c.apps = j["apps"].get<std::vector<std::string>>();
    if (j.contains("degrees")) c.degrees = j["degrees"].get<std::vector<size_t>>();
    if (j.contains("chaff_counts")) c.chaff_counts = j["chaff_counts"].get<std::vector<size_t>>();
    if (j.contains("schemes")) {
      c.schemes.clear();
      for (const auto& s : j["schemes"]) c.schemes.push_back(thresholds::ParseSchemeKind(s));
    }
    if (j.contains("taus")) c.taus = j["taus"].get<std::vector<double>>();
    if (j.contains("divisors")) c.divisors = j["divisors"].get<std::vector<double>>();
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<uint64_t>>();
    if (j.contains("repetitions")) c.repetitions = j["repetitions"].get<size_t>();
    if (j.contains("auth_windows")) c.auth_windows = j["auth_windows"].get<size_t>();
    if (j.contains("max_attempts")) c.max_attempts = j["max_attempts"].get<size_t>();
    if (j.contains("reenroll_every")) c.reenroll_every = j["reenroll_every"].get<size_t>();
    if (j.contains("normalization")) {
      c.normalization = encoder::ParseNormalizationScheme(j["normalization"].get<std::string>());
    }
    if (j.contains("normalization_scope")) {
      c.normalization_scope = ParseNormalizationScope(j["normalization_scope"].get<std::string>());
    }
    if (j.contains("key_bytes")) c.key_bytes = j["key_bytes"].get<size_t>();
    if (j.contains("record_timing")) c.record_timing = j["record_timing"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<size_t>();
  } catch (const json::exception& e) {
    Invalid(std::string("malformed config: ") + e.what());
  }
  c.Validate();
  return c;
}

json ToJson(const ExperimentConfig& c) {
  json j;
  if (!c.dataset.empty()) j["dataset"] = c.dataset;
  if (!c.profiles.empty()) {
    j["profiles"] = c.profiles;
    j["days"] = c.days;
  }
  j["apps"] = c.apps;
  j["degrees"] = c.degrees;
  j["chaff_counts"] = c.chaff_counts;
  j["schemes"] = json::array();
  for (auto s : c.schemes) j["schemes"].push_back(thresholds::SchemeKindName(s));
  j["taus"] = c.taus;
  j["divisors"] = c.divisors;
  j["seeds"] = c.seeds;
  j["repetitions"] = c.repetitions;
  j["auth_windows"] = c.auth_windows;
  j["max_attempts"] = c.max_attempts;
  j["reenroll_every"] = c.reenroll_every;
  j["normalization"] = encoder::NormalizationSchemeName(c.normalization);
  j["normalization_scope"] = NormalizationScopeName(c.normalization_scope);
  j["key_bytes"] = c.key_bytes;
  j["record_timing"] = c.record_timing;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    Invalid(path + ": " + e.what());
  }
  return ConfigFromJson(j, std::filesystem::path(path).parent_path().string());
}

behavior::BehaviorDataset LoadDataset(const ExperimentConfig& config) {
  if (!config.dataset.empty()) return behavior::Ingest(config.dataset);
  return behavior::SynthGenerate(behavior::LoadProfiles(config.profiles), config.days);
}

PreparedData Prepare(const behavior::BehaviorDataset& dataset, const ExperimentConfig& config) {
  PreparedData data;
  std::vector<behavior::FeatureVector> fleet;
  for (const auto& [app, series] : dataset) {
    auto& out = data.windows[app];
    for (const auto& w : behavior::SlideWindows(app, series)) {
      out.push_back(behavior::WindowFeatures(w));
    }
    fleet.insert(fleet.end(), out.begin(), out.end());
  }
  std::optional<encoder::NormalizationParams> shared;
  if (config.normalization_scope == NormalizationScope::kFleet) {
    shared = encoder::CalibrateNormalization(fleet, config.normalization);
  }
  for (const auto& [app, windows] : data.windows) {
    data.normalization[app] =
        shared ? *shared : encoder::CalibrateNormalization(windows, config.normalization);
  }
  return data;
}

Fraction EvalFrr(const PreparedData& data, const ExperimentConfig& config, const GridPoint& point) {
  return Run(data, config, point, true, false).frr;
}

Fraction EvalFar(const PreparedData& data, const ExperimentConfig& config, const GridPoint& point) {
  return Run(data, config, point, false, true).far;
}

MetricsRow EvaluatePoint(const PreparedData& data, const ExperimentConfig& config,
                         const GridPoint& point) {
  return Run(data, config, point, true, true);
}

std::vector<GridPoint> ExpandGrid(const PreparedData& data, const ExperimentConfig& config) {
  std::vector<std::string> apps = config.apps;
  if (apps.empty()) {
    for (const auto& [app, w] : data.windows) apps.push_back(app);
  }
  std::vector<GridPoint> grid;
  for (const auto& app : apps) {
    if (!data.windows.count(app)) Invalid("app '" + app + "' is not in the dataset");
    for (SchemeKind scheme : config.schemes) {
      std::vector<std::pair<double, double>> knobs;  // (tau, divisor)
      if (scheme == SchemeKind::kGlobal) {
        for (double tau : config.taus) knobs.emplace_back(tau, 0.0);
      } else {
        const double fallback = scheme == SchemeKind::kPerApp
                                    ? thresholds::kDefaultPerAppDivisor
                                    : thresholds::kDefaultPerFeatureDivisor;
        for (double div : config.divisors) knobs.emplace_back(0.0, div > 0 ? div : fallback);
      }
      for (auto [tau, div] : knobs) {
        for (size_t d : config.degrees) {
          for (size_t c : config.chaff_counts) {
            GridPoint p{app, scheme, tau, div, d, c};
            if (scheme != SchemeKind::kGlobal) p.tau = thresholds::kDefaultGlobalTau;
            grid.push_back(p);
          }
        }
      }
    }
  }
  std::sort(grid.begin(), grid.end(),
            [](const GridPoint& a, const GridPoint& b) { return Coordinates(a) < Coordinates(b); });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const GridPoint& a, const GridPoint& b) {
                           return Coordinates(a) == Coordinates(b);
                         }),
             grid.end());
  return grid;
}

std::vector<MetricsRow> Sweep(const PreparedData& data, const ExperimentConfig& config) {
  config.Validate();
  const auto grid = ExpandGrid(data, config);
  std::vector<MetricsRow> rows(grid.size());
  size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<size_t>(workers, 1, std::max<size_t>(grid.size(), 1));

  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto work = [&] {
    for (size_t i = next++; i < grid.size(); i = next++) {
      try {
        rows[i] = EvaluatePoint(data, config, grid[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = grid.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

void WriteCsv(const std::vector<MetricsRow>& rows, std::ostream& out, bool with_timing) {
  out << "app,scheme,tau,divisor,degree,chaff,frr,frr_rejections,frr_attempts,far,"
         "far_acceptances,far_attempts,false_acceptors,enroll_failures,mean_enroll_ms,"
         "mean_auth_success_ms,mean_auth_fail_ms,mean_attempts_used,max_attempts_used,"
         "total_attempts_used\n";
  for (const auto& r : rows) {
    const auto& p = r.point;
    const bool global = p.scheme == SchemeKind::kGlobal;
    std::string acceptors;
    for (const auto& [app, count] : r.false_acceptors) {
      if (!acceptors.empty()) acceptors += ';';
      acceptors += app + ":" + std::to_string(count);
    }
    out << p.app << ',' << thresholds::SchemeKindName(p.scheme) << ','
        << (global ? FormatNumber(p.tau) : "NA") << ','
        << (global ? "NA" : FormatNumber(p.divisor)) << ',' << p.degree << ',' << p.chaff << ','
        << FormatOptional(r.frr.value()) << ',' << r.frr.events << ',' << r.frr.attempts << ','
        << FormatOptional(r.far.value()) << ',' << r.far.events << ',' << r.far.attempts << ','
        << acceptors << ',' << r.enroll_failures << ','
        << (with_timing ? FormatNumber(r.mean_enroll_ms) : "NA") << ','
        << (with_timing ? FormatOptional(r.mean_auth_success_ms) : "NA") << ','
        << (with_timing ? FormatOptional(r.mean_auth_fail_ms) : "NA") << ','
        << FormatOptional(r.auth_count ? std::optional<double>(
                                             static_cast<double>(r.total_attempts_used) /
                                             static_cast<double>(r.auth_count))
                                       : std::nullopt)
        << ',' << r.max_attempts_used << ',' << r.total_attempts_used << '\n';
  }
}

}  // namespace baafe::eval
