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

#ifndef BAAFE_THRESHOLDS_H_
#define BAAFE_THRESHOLDS_H_

#include <string>
#include <variant>
#include <vector>

#include "baafe/encoder.h"
#include "nlohmann/json.hpp"

namespace baafe::thresholds {

inline constexpr double kDefaultGlobalTau = 57.5;
inline constexpr double kDefaultPerAppDivisor = 3.0;
inline constexpr double kDefaultPerFeatureDivisor = 2.0;

enum class SchemeKind { kGlobal, kPerApp, kPerFeature };

std::string SchemeKindName(SchemeKind k);  // "global" | "per_app" | "per_feature"
SchemeKind ParseSchemeKind(const std::string& name);

struct Global {
  double tau;
};
struct PerApp {
  double tau;
};
struct PerFeature {
  std::vector<double> tau;
};

// Noise-tolerance policy shared by chaff generation and matching.
class ThresholdScheme {
 public:
  // Throws kNonPositive unless every tau > 0.
  explicit ThresholdScheme(std::variant<Global, PerApp, PerFeature> v);

  SchemeKind kind() const;
  // Radius around feature i; Global/PerApp ignore the index.
  double TauFor(size_t feature) const;
  const std::variant<Global, PerApp, PerFeature>& variant() const { return v_; }

 private:
  std::variant<Global, PerApp, PerFeature> v_;
};

// Encoded vectors of one application's enrollment period.
struct CalibrationSet {
  std::vector<encoder::EncodedVector> encoded_history;
};

ThresholdScheme GlobalThreshold(double tau = kDefaultGlobalTau);

// tau = max_i(spread_i) / divisor, spread_i = max - min of code i over history.
// Throws kZeroSpread if every spread is 0.
ThresholdScheme CalibratePerApp(const CalibrationSet& cal, double divisor = kDefaultPerAppDivisor);

// tau_i = spread_i / divisor, with a floor of 1 for constant features.
ThresholdScheme CalibratePerFeature(const CalibrationSet& cal,
                                    double divisor = kDefaultPerFeatureDivisor);

// Per-feature spreads; throws kInvalidCalibration for fewer than two vectors
// or mismatched lengths.
std::vector<double> CodeSpreads(const CalibrationSet& cal);

nlohmann::json ToJson(const ThresholdScheme& s);
ThresholdScheme SchemeFromJson(const nlohmann::json& j);

}  // namespace baafe::thresholds

#endif  // BAAFE_THRESHOLDS_H_
