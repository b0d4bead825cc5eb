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

#include "baafe/thresholds.h"

#include <algorithm>
#include <cmath>

#include "baafe/error.h"

namespace baafe::thresholds {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void CheckPositive(double tau) {
  if (!(tau > 0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kNonPositive, "threshold must be positive, got " + std::to_string(tau));
  }
}

void CheckDivisor(double divisor) {
  if (!(divisor > 0)) throw Error(ErrorCode::kInvalidCalibration, "divisor must be positive");
}

}  // namespace

std::string SchemeKindName(SchemeKind k) {
  switch (k) {
    case SchemeKind::kGlobal: return "global";
    case SchemeKind::kPerApp: return "per_app";
    case SchemeKind::kPerFeature: return "per_feature";
  }
  return "global";
}

SchemeKind ParseSchemeKind(const std::string& name) {
  if (name == "global") return SchemeKind::kGlobal;
  if (name == "per_app") return SchemeKind::kPerApp;
  if (name == "per_feature") return SchemeKind::kPerFeature;
  throw Error(ErrorCode::kInvalidConfig, "unknown threshold scheme '" + name + "'");
}

ThresholdScheme::ThresholdScheme(std::variant<Global, PerApp, PerFeature> v) : v_(std::move(v)) {
  std::visit(Overloaded{[](const Global& g) { CheckPositive(g.tau); },
                        [](const PerApp& a) { CheckPositive(a.tau); },
                        [](const PerFeature& f) {
                          if (f.tau.empty()) {
                            throw Error(ErrorCode::kNonPositive, "empty per-feature thresholds");
                          }
                          for (double t : f.tau) CheckPositive(t);
                        }},
             v_);
}

SchemeKind ThresholdScheme::kind() const {
  return static_cast<SchemeKind>(v_.index());
}

double ThresholdScheme::TauFor(size_t feature) const {
  return std::visit(Overloaded{[](const Global& g) { return g.tau; },
                               [](const PerApp& a) { return a.tau; },
                               [&](const PerFeature& f) { return f.tau.at(feature); }},
                    v_);
}

ThresholdScheme GlobalThreshold(double tau) { return ThresholdScheme(Global{tau}); }

std::vector<double> CodeSpreads(const CalibrationSet& cal) {
  const auto& h = cal.encoded_history;
  if (h.size() < 2) {
    throw Error(ErrorCode::kInvalidCalibration, "calibration needs at least two encoded vectors");
  }
  const size_t n = h.front().codes.size();
  std::vector<uint16_t> lo = h.front().codes, hi = h.front().codes;
  for (const auto& e : h) {
    if (e.codes.size() != n) {
      throw Error(ErrorCode::kInvalidCalibration, "calibration vectors differ in length");
    }
    for (size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], e.codes[i]);
      hi[i] = std::max(hi[i], e.codes[i]);
    }
  }
  std::vector<double> spread(n);
  for (size_t i = 0; i < n; ++i) spread[i] = static_cast<double>(hi[i] - lo[i]);
  return spread;
}

ThresholdScheme CalibratePerApp(const CalibrationSet& cal, double divisor) {
  CheckDivisor(divisor);
  const auto spread = CodeSpreads(cal);
  const double widest = *std::max_element(spread.begin(), spread.end());
  if (widest == 0) throw Error(ErrorCode::kZeroSpread, "every feature is constant over history");
  return ThresholdScheme(PerApp{widest / divisor});
}

ThresholdScheme CalibratePerFeature(const CalibrationSet& cal, double divisor) {
  CheckDivisor(divisor);
  auto spread = CodeSpreads(cal);
  for (double& s : spread) s = s > 0 ? s / divisor : 1.0;
  return ThresholdScheme(PerFeature{std::move(spread)});
}

nlohmann::json ToJson(const ThresholdScheme& s) {
  nlohmann::json j = {{"variant", SchemeKindName(s.kind())}};
  std::visit(Overloaded{[&](const Global& g) { j["tau"] = g.tau; },
                        [&](const PerApp& a) { j["tau"] = a.tau; },
                        [&](const PerFeature& f) { j["tau"] = f.tau; }},
             s.variant());
  return j;
}

ThresholdScheme SchemeFromJson(const nlohmann::json& j) {
  switch (ParseSchemeKind(j.at("variant").get<std::string>())) {
    case SchemeKind::kGlobal: return ThresholdScheme(Global{j.at("tau").get<double>()});
    case SchemeKind::kPerApp: return ThresholdScheme(PerApp{j.at("tau").get<double>()});
    case SchemeKind::kPerFeature:
      return ThresholdScheme(PerFeature{j.at("tau").get<std::vector<double>>()});
  }
  throw Error(ErrorCode::kSchemaError, "bad threshold scheme");
}

}  // namespace baafe::thresholds
