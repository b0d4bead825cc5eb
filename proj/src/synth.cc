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

#include "baafe/synth.h"

#include <cmath>
#include <fstream>
#include <numbers>

#include "baafe/error.h"
#include "baafe/random.h"

namespace baafe::behavior {

using nlohmann::json;

BehaviorDataset SynthGenerate(const std::vector<AppProfile>& profiles, size_t days, Date start) {
  if (days < kDefaultWindowDays) {
    throw Error(ErrorCode::kInsufficientData, "synthetic datasets need at least 15 days");
  }
  BehaviorDataset out;
  for (const auto& p : profiles) {
    AppSeries series;
    for (size_t a = 0; a < kNumAttributes; ++a) {
      const AttributeProfile& ap = p.attributes[a];
      Rng rng(DeriveSeed(p.seed, a));
      AttributeSeries s{std::string(kAttributeNames[a]), start, {}};
      s.values.reserve(days);
      for (size_t day = 0; day < days; ++day) {
        const double t = static_cast<double>(day);
        const double noise = rng.Gaussian() * ap.daily_noise_sd;
        const double v = ap.base_level * (1.0 + ap.drift_per_day * t) +
                         ap.weekly_amplitude * std::sin(2.0 * std::numbers::pi * t / 7.0) + noise;
        s.values.push_back(std::max(0.0, v));
      }
      series.push_back(std::move(s));
    }
    out[p.app_id] = std::move(series);
  }
  return out;
}

std::vector<AppProfile> ProfilesFromJson(const json& j) {
  auto fail = [](const std::string& what) -> void {
    throw Error(ErrorCode::kInvalidConfig, "profiles: " + what);
  };
  if (!j.is_array()) fail("expected an array");
  std::vector<AppProfile> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("app_id") || !item.contains("attributes")) {
      fail("each profile needs app_id and attributes");
    }
    AppProfile p;
    p.app_id = item.at("app_id").get<std::string>();
    p.seed = item.value("seed", uint64_t{0});
    const auto& attrs = item.at("attributes");
    for (size_t a = 0; a < kNumAttributes; ++a) {
      const std::string name(kAttributeNames[a]);
      if (!attrs.contains(name)) fail("'" + p.app_id + "' lacks attribute '" + name + "'");
      const auto& fields = attrs.at(name);
      AttributeProfile& ap = p.attributes[a];
      ap.base_level = fields.at("base_level").get<double>();
      ap.daily_noise_sd = fields.value("daily_noise_sd", 0.0);
      ap.weekly_amplitude = fields.value("weekly_amplitude", 0.0);
      ap.drift_per_day = fields.value("drift_per_day", 0.0);
      if (ap.base_level < 0 || ap.daily_noise_sd < 0) {
        fail("'" + p.app_id + "/" + name + "': base_level and daily_noise_sd must be >= 0");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

json ProfilesToJson(const std::vector<AppProfile>& profiles) {
  json out = json::array();
  for (const auto& p : profiles) {
    json attrs = json::object();
    for (size_t a = 0; a < kNumAttributes; ++a) {
      const auto& ap = p.attributes[a];
      attrs[std::string(kAttributeNames[a])] = {{"base_level", ap.base_level},
                                                {"daily_noise_sd", ap.daily_noise_sd},
                                                {"weekly_amplitude", ap.weekly_amplitude},
                                                {"drift_per_day", ap.drift_per_day}};
    }
    out.push_back({{"app_id", p.app_id}, {"seed", p.seed}, {"attributes", attrs}});
  }
  return out;
}

std::vector<AppProfile> LoadProfiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return ProfilesFromJson(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

}  // namespace baafe::behavior
