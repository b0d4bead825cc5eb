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

#include "baafe/extractor.h"

#include <chrono>
#include <vector>

#include "baafe/error.h"
#include "baafe/random.h"

namespace baafe::extractor {

using nlohmann::json;

json ToJson(const FeRecord& r) {
  return {{"app_id", r.app_id},
          {"normalization", encoder::ToJson(r.normalization)},
          {"encoder", encoder::ToJson(r.encoder)},
          {"thresholds", thresholds::ToJson(r.thresholds)},
          {"key_hash", ToHex(r.key_hash)}};
}

FeRecord FeRecordFromJson(const json& j) {
  FeRecord r;
  r.app_id = j.at("app_id").get<std::string>();
  r.normalization = encoder::NormalizationFromJson(j.at("normalization"));
  r.encoder = encoder::EncoderFromJson(j.at("encoder"));
  r.thresholds = thresholds::SchemeFromJson(j.at("thresholds"));
  auto digest = DigestFromHex(j.at("key_hash").get<std::string>());
  if (!digest) throw Error(ErrorCode::kSchemaError, "key_hash must be 64 hex digits");
  r.key_hash = *digest;
  return r;
}

EnrollmentResult EnrollBehavior(const std::string& app_id,
                                const behavior::FeatureVector& enrollment_features,
                                const encoder::NormalizationParams& normalization,
                                std::span<const behavior::FeatureVector> calibration_history,
                                const ffmath::KeyMaterial& key, const EnrollmentConfig& config,
                                uint64_t seed) {
  config.sec.Validate();
  if (config.sec.n != enrollment_features.values.size()) {
    throw Error(ErrorCode::kInvalidParams,
                "n = " + std::to_string(config.sec.n) + " but the behavior has " +
                    std::to_string(enrollment_features.values.size()) + " features");
  }
  encoder::EncoderParams enc = encoder::GenerateEncoderParams(DeriveSeed(seed, "encoder"),
                                                              config.sec.n);
  auto encode = [&](const behavior::FeatureVector& fv) {
    return encoder::Encode(encoder::Normalize(fv, normalization), enc);
  };

  const ThresholdPolicy& policy = config.thresholds;
  thresholds::ThresholdScheme scheme = thresholds::GlobalThreshold(policy.tau);
  if (policy.kind != thresholds::SchemeKind::kGlobal) {
    thresholds::CalibrationSet cal;
    for (const auto& fv : calibration_history) cal.encoded_history.push_back(encode(fv));
    if (policy.kind == thresholds::SchemeKind::kPerApp) {
      scheme = thresholds::CalibratePerApp(
          cal, policy.divisor > 0 ? policy.divisor : thresholds::kDefaultPerAppDivisor);
    } else {
      scheme = thresholds::CalibratePerFeature(
          cal, policy.divisor > 0 ? policy.divisor : thresholds::kDefaultPerFeatureDivisor);
    }
  }

  encoder::EncodedVector encoded = encode(enrollment_features);
  vault::Vault v = vault::Enroll(app_id, encoded, key, config.sec, scheme,
                                 DeriveSeed(seed, "vault"));
  FeRecord record{app_id, normalization, std::move(enc), scheme, key.hash()};
  return {std::move(v), std::move(record), std::move(encoded)};
}

AuthReport AuthenticateFeatures(const behavior::FeatureVector& features, const vault::Vault& v,
                                const FeRecord& record, const AuthOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto probe = encoder::Encode(encoder::Normalize(features, record.normalization),
                                     record.encoder);
  const auto cands = reconstruct::MatchCandidates(probe, v, record.thresholds);
  AuthReport report;
  report.candidates = cands.q();
  report.outcome = reconstruct::ReconstructKey(cands, v.sec, record.key_hash,
                                               options.max_attempts, options.seed);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

AuthReport Authenticate(const behavior::BehaviorWindow& window, const vault::Vault& v,
                        const FeRecordMap& records, const AuthOptions& options) {
  auto it = records.find(v.app_id);
  if (it == records.end()) {
    throw Error(ErrorCode::kUnknownApp, "no extractor record for '" + v.app_id + "'");
  }
  return AuthenticateFeatures(behavior::WindowFeatures(window), v, it->second, options);
}

}  // namespace baafe::extractor
