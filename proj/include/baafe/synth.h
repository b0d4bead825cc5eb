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

#ifndef BAAFE_SYNTH_H_
#define BAAFE_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "baafe/behavior.h"
#include "nlohmann/json.hpp"

namespace baafe::behavior {

struct AttributeProfile {
  double base_level = 0;
  double daily_noise_sd = 0;
  double weekly_amplitude = 0;
  double drift_per_day = 0;
};

// Generator spec for one synthetic application.
struct AppProfile {
  std::string app_id;
  std::array<AttributeProfile, kNumAttributes> attributes{};
  uint64_t seed = 0;
};

// value(day) = max(0, base * (1 + drift * day)
//                     + amplitude * sin(2 pi day / 7) + N(0, noise_sd))
// Deterministic in (profile, days, start).
BehaviorDataset SynthGenerate(const std::vector<AppProfile>& profiles, size_t days,
                              Date start = Date(std::chrono::year{2024} / 1 / 1));

// Profiles file: JSON array of {"app_id", "seed", "attributes": {name: {...}}}.
std::vector<AppProfile> ProfilesFromJson(const nlohmann::json& j);
nlohmann::json ProfilesToJson(const std::vector<AppProfile>& profiles);
std::vector<AppProfile> LoadProfiles(const std::string& path);

}  // namespace baafe::behavior

#endif  // BAAFE_SYNTH_H_
