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


#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "baafe/behavior.h"
#include "baafe/error.h"
#include "baafe/extractor.h"
#include "baafe/random.h"
#include "baafe/reconstruct.h"
#include "baafe/vault.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace baafe::reconstruct {
namespace {

using encoder::EncodedVector;
using ffmath::FieldElement;
using ffmath::KeyMaterial;
using testing_util::CodeOf;
using vault::SecurityParams;
using vault::Vault;
using vault::VaultPoint;

KeyMaterial Key(size_t len = 32, uint8_t fill = 0x33) {
  return KeyMaterial::FromBytes(Bytes(len, fill));
}

Vault TwoPointVault() {
  Vault v;
  v.app_id = "a";
  v.sec = {1, 1, 0};
  v.points = {{FieldElement(300), FieldElement(2), {}}, {FieldElement(100), FieldElement(1), {}}};
  return v;
}

TEST(MatchCandidatesTest, NearestWithinTau) {
  const Vault v = TwoPointVault();
  auto c = MatchCandidates(EncodedVector{{120}}, v, thresholds::GlobalThreshold());
  ASSERT_EQ(c.q(), 1u);
  EXPECT_EQ(c.pairs[0].x, FieldElement(100));
  c = MatchCandidates(EncodedVector{{200}}, v, thresholds::GlobalThreshold());
  EXPECT_EQ(c.q(), 0u);
  c = MatchCandidates(EncodedVector{{280}}, v, thresholds::GlobalThreshold());
  ASSERT_EQ(c.q(), 1u);
  EXPECT_EQ(c.pairs[0].x, FieldElement(300));
}

TEST(MatchCandidatesTest, TieGoesToSmallerXAndDuplicatesCollapse) {
  const Vault v = TwoPointVault();
  auto c = MatchCandidates(EncodedVector{{200}}, v, thresholds::GlobalThreshold(100));
  ASSERT_EQ(c.q(), 1u);
  EXPECT_EQ(c.pairs[0].x, FieldElement(100));
  c = MatchCandidates(EncodedVector{{99, 100, 101}}, v, thresholds::GlobalThreshold());
  EXPECT_EQ(c.q(), 1u);
}

TEST(MatchCandidatesTest, PerFeatureOnlyScansOwnLabel) {
  Vault v;
  v.sec = {2, 1, 1};
  v.scheme = thresholds::SchemeKind::kPerFeature;
  v.points = {{FieldElement(100), FieldElement(1), 0u},
              {FieldElement(500), FieldElement(2), 1u},
              {FieldElement(110), FieldElement(3), 1u}};
  const thresholds::ThresholdScheme s(thresholds::PerFeature{{20, 20}});
  // Feature 1 at 105 must not select label-0's point at 100.
  auto c = MatchCandidates(EncodedVector{{105, 105}}, v, s);
  ASSERT_EQ(c.q(), 2u);
  std::set<uint64_t> xs;
  for (const auto& p : c.pairs) xs.insert(p.x.value());
  EXPECT_EQ(xs, (std::set<uint64_t>{100, 110}));
}

// Brute-force nearest-point reference for the sorted-scan implementation.
TEST(MatchCandidatesTest, AgreesWithLinearScan) {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    Vault v;
    v.sec = {8, 20, 2};
    std::set<uint64_t> used;
    while (v.points.size() < 28) {
      const uint64_t x = rng.UniformBelow(2000);
      if (used.insert(x).second) v.points.push_back({FieldElement(x), FieldElement(x * 7), {}});
    }
    EncodedVector probe;
    for (int i = 0; i < 8; ++i) probe.codes.push_back(static_cast<uint16_t>(rng.UniformBelow(2100)));
    const double tau = rng.Uniform(1, 80);
    const auto got = MatchCandidates(probe, v, thresholds::GlobalThreshold(tau));
    std::vector<uint64_t> want;
    for (uint16_t code : probe.codes) {
      const VaultPoint* best = nullptr;
      for (const auto& p : v.points) {
        const double d = std::abs(static_cast<double>(p.x.value()) - code);
        const double bd = best ? std::abs(static_cast<double>(best->x.value()) - code) : 1e18;
        if (d < bd || (d == bd && p.x.value() < best->x.value())) best = &p;
      }
      if (std::abs(static_cast<double>(best->x.value()) - code) <= tau &&
          std::find(want.begin(), want.end(), best->x.value()) == want.end()) {
        want.push_back(best->x.value());
      }
    }
    std::vector<uint64_t> have;
    for (const auto& p : got.pairs) have.push_back(p.x.value());
    ASSERT_EQ(have, want);
  }
}

TEST(CombinationSamplerTest, SmallSpaceEnumeratesEverySubsetOnce) {
  for (auto [q, k] : std::vector<std::pair<size_t, size_t>>{{6, 2}, {10, 3}, {12, 12}, {9, 1}}) {
    CombinationSampler s(q, k, 5);
    std::set<std::vector<uint32_t>> seen;
    std::vector<uint32_t> out;
    while (s.Next(out)) {
      ASSERT_EQ(out.size(), k);
      ASSERT_TRUE(std::is_sorted(out.begin(), out.end()));
      ASSERT_LT(out.back(), q);
      ASSERT_TRUE(seen.insert(out).second);
    }
    EXPECT_EQ(seen.size(), Binomial(q, k));
  }
}

TEST(CombinationSamplerTest, LargeSpaceNeverRepeats) {
  CombinationSampler s(56, 33, 9);
  EXPECT_GE(s.total(), kSmallCombinationSpace);
  std::set<std::vector<uint32_t>> seen;
  std::vector<uint32_t> out;
  for (int i = 0; i < 20000; ++i) {
    ASSERT_TRUE(s.Next(out));
    ASSERT_EQ(std::set<uint32_t>(out.begin(), out.end()).size(), 33u);
    ASSERT_TRUE(seen.insert(out).second);
  }
}

TEST(CombinationSamplerTest, FirstDrawIsRoughlyUniform) {
  std::map<std::vector<uint32_t>, int> counts;
  std::vector<uint32_t> out;
  const int trials = 30000;
  for (int t = 0; t < trials; ++t) {
    CombinationSampler s(6, 2, DeriveSeed(77, static_cast<uint64_t>(t)));
    s.Next(out);
    ++counts[out];
  }
  ASSERT_EQ(counts.size(), 15u);
  double chi2 = 0;
  const double expected = trials / 15.0;
  for (const auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 36.1);  // 99.9th percentile of chi-square with 14 dof
}

TEST(BinomialTest, Values) {
  EXPECT_EQ(Binomial(15, 3), 455u);
  EXPECT_EQ(Binomial(3, 5), 0u);
  EXPECT_EQ(Binomial(256, 33), UINT64_MAX);
}

struct Enrolled {
  Vault vault;
  KeyMaterial key;
  EncodedVector codes;
  ffmath::Polynomial p;
};

Enrolled EnrollSpaced(size_t n, size_t c, size_t d, uint64_t seed = 1) {
  EncodedVector e;
  for (size_t i = 0; i < n; ++i) e.codes.push_back(static_cast<uint16_t>(500 + 700 * i));
  const auto key = Key(std::min<size_t>(32, 7 * (d + 1) - 2));
  auto v = vault::Enroll("app", e, key, {n, c, d}, thresholds::GlobalThreshold(), seed);
  return {v, key, e, ffmath::KeyToCoeffs(key, d)};
}

TEST(ReconstructTest, TooFewCandidates) {
  const auto en = EnrollSpaced(10, 20, 4);
  CandidateSet cands = MatchCandidates(en.codes, en.vault, thresholds::GlobalThreshold());
  cands.pairs.resize(4);
  const auto out = ReconstructKey(cands, en.vault.sec, en.key.hash(), 20000, 1);
  EXPECT_FALSE(out.success());
  EXPECT_EQ(out.reason, FailureReason::kTooFewCandidates);
  EXPECT_EQ(out.attempts_used, 0u);
}

TEST(ReconstructTest, AllGenuineSucceedsOnFirstAttempt) {
  const auto en = EnrollSpaced(56, 200, 32);
  const auto cands = MatchCandidates(en.codes, en.vault, thresholds::GlobalThreshold());
  ASSERT_EQ(cands.q(), 56u);
  for (const auto& p : cands.pairs) ASSERT_EQ(ffmath::PolyEval(en.p, p.x), p.y);
  const auto out = ReconstructKey(cands, en.vault.sec, en.key.hash(), 20000, 3);
  ASSERT_TRUE(out.success());
  EXPECT_EQ(out.attempts_used, 1u);
  EXPECT_EQ(*out.key, en.key);
}

TEST(ReconstructTest, BoundedNoiseStillSelectsGenuinePoints) {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const auto en = EnrollSpaced(40, 200, 20, rng.NextU64());
    EncodedVector probe = en.codes;
    for (auto& c : probe.codes) c = static_cast<uint16_t>(c + static_cast<int>(rng.UniformBelow(58)) - 28);
    const auto cands = MatchCandidates(probe, en.vault, thresholds::GlobalThreshold());
    ASSERT_EQ(cands.q(), 40u);
    const auto out = ReconstructKey(cands, en.vault.sec, en.key.hash(), 20000, t);
    ASSERT_TRUE(out.success());
  }
}

TEST(ReconstructTest, AttemptsNeverExceedBudgetOrSpace) {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const size_t d = 1 + rng.UniformBelow(6);
    const auto en = EnrollSpaced(d + 3, 30, d, rng.NextU64());
    // Only chaff: the key can never be recovered.
    CandidateSet cands;
    const auto hash = en.key.hash();
    for (const auto& p : en.vault.points) {
      if (ffmath::PolyEval(en.p, p.x) != p.y) cands.pairs.push_back(p);
    }
    cands.pairs.resize(d + 1 + rng.UniformBelow(8));
    const size_t budget = 1 + rng.UniformBelow(400);
    const auto out = ReconstructKey(cands, en.vault.sec, hash, budget, t);
    ASSERT_FALSE(out.success());
    EXPECT_EQ(out.reason, FailureReason::kAttemptsExhausted);
    ASSERT_LE(out.attempts_used, std::min<uint64_t>(budget, Binomial(cands.q(), d + 1)));
    ASSERT_EQ(out.attempts_used, std::min<uint64_t>(budget, Binomial(cands.q(), d + 1)));
  }
}

TEST(ReconstructTest, CrossVaultCandidatesFail) {
  const auto a = EnrollSpaced(56, 200, 32, 1);
  auto other_key = Key(32, 0x44);
  EncodedVector e;
  for (size_t i = 0; i < 56; ++i) e.codes.push_back(static_cast<uint16_t>(900 + 700 * i));
  const auto b = vault::Enroll("b", e, other_key, {56, 200, 32}, thresholds::GlobalThreshold(), 2);
  const auto cands = MatchCandidates(a.codes, b, thresholds::GlobalThreshold());
  const auto out = ReconstructKey(cands, b.sec, other_key.hash(), 20000, 1);
  EXPECT_FALSE(out.success());
}

// Extractor pipeline over behavior features.

behavior::FeatureVector RandomFeatures(Rng& rng, size_t n) {
  behavior::FeatureVector fv;
  for (size_t i = 0; i < n; ++i) fv.values.push_back(rng.Uniform(0, 1000));
  return fv;
}

encoder::NormalizationParams Range(size_t n) {
  encoder::NormalizationParams p;
  p.min.assign(n, 0);
  p.max.assign(n, 1000);
  return p;
}

TEST(ExtractorTest, ZeroNoiseRoundTripAndPrivateRecord) {
  Rng rng(6);
  const auto fv = RandomFeatures(rng, 56);
  extractor::EnrollmentConfig cfg;
  cfg.sec = {56, 200, 24};
  const auto key = Key();
  const auto res = extractor::EnrollBehavior("svc", fv, Range(56), {}, key, cfg, 11);
  EXPECT_EQ(res.record.key_hash, key.hash());
  const auto report = extractor::AuthenticateFeatures(fv, res.vault, res.record, {20000, 1});
  ASSERT_TRUE(report.outcome.success());
  EXPECT_EQ(*report.outcome.key, key);

  const auto back = extractor::FeRecordFromJson(extractor::ToJson(res.record));
  EXPECT_EQ(back.encoder.r1_matrix, res.record.encoder.r1_matrix);
  EXPECT_EQ(back.key_hash, res.record.key_hash);
  EXPECT_TRUE(extractor::AuthenticateFeatures(fv, res.vault, back, {20000, 1}).outcome.success());
}

TEST(ExtractorTest, CalibratedPoliciesUseHistory) {
  Rng rng(7);
  std::vector<behavior::FeatureVector> history;
  for (int i = 0; i < 5; ++i) history.push_back(RandomFeatures(rng, 56));
  extractor::EnrollmentConfig cfg;
  cfg.sec = {56, 100, 8};
  cfg.thresholds.kind = thresholds::SchemeKind::kPerFeature;
  const auto res = extractor::EnrollBehavior("svc", history[0], Range(56), history, Key(), cfg, 3);
  EXPECT_EQ(res.record.thresholds.kind(), thresholds::SchemeKind::kPerFeature);
  EXPECT_EQ(res.vault.points.size(), 56u + 56u * 100u);
  EXPECT_TRUE(extractor::AuthenticateFeatures(history[0], res.vault, res.record, {}).outcome.success());
  cfg.thresholds.kind = thresholds::SchemeKind::kPerApp;
  EXPECT_EQ(CodeOf([&] { extractor::EnrollBehavior("svc", history[0], Range(56), {}, Key(), cfg, 3); }),
            ErrorCode::kInvalidCalibration);
}

TEST(ExtractorTest, ParameterMismatch) {
  Rng rng(8);
  extractor::EnrollmentConfig cfg;
  cfg.sec = {40, 100, 8};
  EXPECT_EQ(CodeOf([&] {
              extractor::EnrollBehavior("svc", RandomFeatures(rng, 56), Range(56), {}, Key(), cfg, 3);
            }),
            ErrorCode::kInvalidParams);
}

TEST(ExtractorTest, AuthenticateWindowUnknownApp) {
  behavior::BehaviorWindow w{"ghost", behavior::Date{}, 15, {}};
  Vault v;
  v.app_id = "ghost";
  EXPECT_EQ(CodeOf([&] { extractor::Authenticate(w, v, {}, {}); }), ErrorCode::kUnknownApp);
}

}  // namespace
}  // namespace baafe::reconstruct
