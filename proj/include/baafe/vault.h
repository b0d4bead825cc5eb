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

#ifndef BAAFE_VAULT_H_
#define BAAFE_VAULT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "baafe/encoder.h"
#include "baafe/key_codec.h"
#include "baafe/random.h"
#include "baafe/thresholds.h"

namespace baafe::vault {

inline constexpr int kVaultFormatVersion = 1;
inline constexpr uint32_t kCodeSpace = 65536;
inline constexpr int kMaxConsecutiveChaffRejections = 10000;

// n features, c chaff points (per feature under PerFeature), degree d.
struct SecurityParams {
  size_t n = 56;
  size_t c = 200;
  size_t d = 32;

  // Throws kInvalidParams unless n >= d + 1, c >= 1, d >= 1.
  void Validate() const;

  friend bool operator==(const SecurityParams&, const SecurityParams&) = default;
};

struct VaultPoint {
  ffmath::FieldElement x;  // 16-bit code embedded verbatim
  ffmath::FieldElement y;
  std::optional<uint32_t> label;  // feature index, PerFeature only

  friend bool operator==(const VaultPoint&, const VaultPoint&) = default;
};

// Public helper data. Holds neither the key hash nor thresholds.
struct Vault {
  std::string app_id;
  std::vector<VaultPoint> points;  // shuffled; writers must keep this order
  SecurityParams sec;
  thresholds::SchemeKind scheme = thresholds::SchemeKind::kGlobal;
  int format_version = kVaultFormatVersion;

  friend bool operator==(const Vault&, const Vault&) = default;
};

// Genuine points for an encoding: distinct codes (unlabeled) for Global and
// PerApp, one labeled point per feature for PerFeature.
std::vector<VaultPoint> GenuinePoints(const encoder::EncodedVector& encoded,
                                      const thresholds::ThresholdScheme& scheme,
                                      const ffmath::Polynomial& p);

// Rejection-samples chaff outside the scheme's threshold regions and off the
// polynomial. Throws kChaffSpaceExhausted.
std::vector<VaultPoint> GenerateChaff(std::span<const VaultPoint> genuine, size_t c,
                                      const thresholds::ThresholdScheme& scheme,
                                      const ffmath::Polynomial& p, Rng& rng);

Vault Enroll(const std::string& app_id, const encoder::EncodedVector& encoded,
             const ffmath::KeyMaterial& key, const SecurityParams& sec,
             const thresholds::ThresholdScheme& scheme, uint64_t seed);

// Compact JSON in a fixed field order; round trips byte-exactly.
std::string SerializeVault(const Vault& v);
// Throws kVersionMismatch or kSchemaError.
Vault DeserializeVault(std::string_view bytes);

void SaveVault(const Vault& v, const std::string& path);
Vault LoadVault(const std::string& path);

}  // namespace baafe::vault

#endif  // BAAFE_VAULT_H_
