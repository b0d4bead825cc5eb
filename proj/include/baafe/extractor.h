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

#ifndef BAAFE_EXTRACTOR_H_
#define BAAFE_EXTRACTOR_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "baafe/behavior.h"
#include "baafe/crypto.h"
#include "baafe/encoder.h"
#include "baafe/key_codec.h"
#include "baafe/reconstruct.h"
#include "baafe/thresholds.h"
#include "baafe/vault.h"
#include "nlohmann/json.hpp"

namespace baafe::extractor {

// Fuzzy-extractor private state for one enrolled application. Never leaves
// the extractor.
struct FeRecord {
  std::string app_id;
  encoder::NormalizationParams normalization;
  encoder::EncoderParams encoder;
  thresholds::ThresholdScheme thresholds = thresholds::GlobalThreshold();
  Digest key_hash{};
};

nlohmann::json ToJson(const FeRecord& r);
FeRecord FeRecordFromJson(const nlohmann::json& j);

using FeRecordMap = std::map<std::string, FeRecord>;

// How the threshold scheme is chosen at enrollment. divisor <= 0 selects the
// scheme's default divisor.
struct ThresholdPolicy {
  thresholds::SchemeKind kind = thresholds::SchemeKind::kGlobal;
  double tau = thresholds::kDefaultGlobalTau;
  double divisor = 0;
};

struct EnrollmentConfig {
  vault::SecurityParams sec;
  ThresholdPolicy thresholds;
};

struct EnrollmentResult {
  vault::Vault vault;
  FeRecord record;
  encoder::EncodedVector encoded;
};

// normalize -> encode -> (calibrate thresholds) -> enroll. The calibration
// history is the application's own feature history; it is only consulted for
// the PerApp and PerFeature policies.
EnrollmentResult EnrollBehavior(const std::string& app_id,
                                const behavior::FeatureVector& enrollment_features,
                                const encoder::NormalizationParams& normalization,
                                std::span<const behavior::FeatureVector> calibration_history,
                                const ffmath::KeyMaterial& key, const EnrollmentConfig& config,
                                uint64_t seed);

struct AuthOptions {
  size_t max_attempts = reconstruct::kDefaultMaxAttempts;
  uint64_t seed = 0;
};

struct AuthReport {
  reconstruct::AuthOutcome outcome;
  size_t candidates = 0;
  double elapsed_ms = 0;
};

AuthReport AuthenticateFeatures(const behavior::FeatureVector& features, const vault::Vault& v,
                                const FeRecord& record, const AuthOptions& options);

// Full pipeline from a behavior window. Throws kUnknownApp when `records`
// has no entry for the vault's application.
AuthReport Authenticate(const behavior::BehaviorWindow& window, const vault::Vault& v,
                        const FeRecordMap& records, const AuthOptions& options);

}  // namespace baafe::extractor

#endif  // BAAFE_EXTRACTOR_H_
