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

#ifndef BAAFE_EXPERIMENT_H_
#define BAAFE_EXPERIMENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "baafe/behavior.h"
#include "baafe/encoder.h"
#include "baafe/extractor.h"
#include "baafe/thresholds.h"
#include "nlohmann/json.hpp"

namespace baafe::eval {

// Where MinMax bounds come from: every window of every application in the
// dataset, or only the enrolling application's own windows.
enum class NormalizationScope { kFleet, kApp };

struct ExperimentConfig {
  // Either a behavior JSONL dataset, or synthetic profiles plus a day count.
  std::string dataset;
  std::string profiles;
  size_t days = 30;

  std::vector<std::string> apps;  // targets; empty means every app
  std::vector<size_t> degrees{8, 24, 32, 40, 48};
  std::vector<size_t> chaff_counts{100, 200, 400, 800, 1600};
  std::vector<thresholds::SchemeKind> schemes{thresholds::SchemeKind::kGlobal};
  std::vector<double> taus{thresholds::kDefaultGlobalTau};  // Global only
  std::vector<double> divisors{0};  // PerApp/PerFeature; 0 = scheme default
  std::vector<uint64_t> seeds{1};
  size_t repetitions = 1;

  size_t auth_windows = 15;
  size_t max_attempts = 20000;
  size_t reenroll_every = 0;  // 0 disables re-enrollment
  encoder::NormalizationScheme normalization = encoder::NormalizationScheme::kMinMax;
  NormalizationScope normalization_scope = NormalizationScope::kFleet;
  size_t key_bytes = 32;
  bool record_timing = false;
  size_t threads = 0;  // 0 = hardware concurrency

  // Throws kInvalidConfig.
  void Validate() const;
};

// Relative dataset/profiles paths resolve against `base_dir`.
ExperimentConfig ConfigFromJson(const nlohmann::json& j, const std::string& base_dir = "");
nlohmann::json ToJson(const ExperimentConfig& c);
ExperimentConfig LoadConfig(const std::string& path);

// Feature vectors of every sliding window, per application, plus the
// normalization each application enrolls with.
struct PreparedData {
  std::map<std::string, std::vector<behavior::FeatureVector>> windows;
  std::map<std::string, encoder::NormalizationParams> normalization;
};

PreparedData Prepare(const behavior::BehaviorDataset& dataset, const ExperimentConfig& config);
// Loads the dataset or synthesizes it from the profiles.
behavior::BehaviorDataset LoadDataset(const ExperimentConfig& config);

struct GridPoint {
  std::string app;
  thresholds::SchemeKind scheme = thresholds::SchemeKind::kGlobal;
  double tau = thresholds::kDefaultGlobalTau;
  double divisor = 0;
  size_t degree = 32;
  size_t chaff = 200;
};

struct Fraction {
  size_t events = 0;
  size_t attempts = 0;

  std::optional<double> value() const {
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(events) / static_cast<double>(attempts);
  }
};

struct MetricsRow {
  GridPoint point;
  Fraction frr;
  Fraction far;
  std::map<std::string, size_t> false_acceptors;  // impostor app -> acceptances
  size_t enroll_failures = 0;
  double mean_enroll_ms = 0;
  std::optional<double> mean_auth_success_ms;
  std::optional<double> mean_auth_fail_ms;
  size_t total_attempts_used = 0;
  size_t auth_count = 0;
  size_t max_attempts_used = 0;
};

// Enroll on window 0, authenticate own windows 1..auth_windows.
Fraction EvalFrr(const PreparedData& data, const ExperimentConfig& config, const GridPoint& point);
// Enroll the target, probe with every other application's windows.
Fraction EvalFar(const PreparedData& data, const ExperimentConfig& config, const GridPoint& point);

MetricsRow EvaluatePoint(const PreparedData& data, const ExperimentConfig& config,
                         const GridPoint& point);

std::vector<GridPoint> ExpandGrid(const PreparedData& data, const ExperimentConfig& config);

// Rows sorted by grid coordinates, independent of evaluation order.
std::vector<MetricsRow> Sweep(const PreparedData& data, const ExperimentConfig& config);

// Timing columns are written as NA unless `with_timing`.
void WriteCsv(const std::vector<MetricsRow>& rows, std::ostream& out, bool with_timing);

}  // namespace baafe::eval

#endif  // BAAFE_EXPERIMENT_H_
