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

#include "baafe/error.h"
#include "baafe/random.h"
#include "baafe/vault.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace baafe::vault {
namespace {

using encoder::EncodedVector;
using ffmath::FieldElement;
using ffmath::KeyMaterial;
using ffmath::Polynomial;
using testing_util::CodeOf;
using thresholds::PerFeature;
using thresholds::ThresholdScheme;

EncodedVector SpacedCodes(size_t n, uint16_t start = 1000, uint16_t step = 500) {
  EncodedVector e;
  for (size_t i = 0; i < n; ++i) e.codes.push_back(static_cast<uint16_t>(start + i * step));
  return e;
}

KeyMaterial Key(size_t len = 32, uint8_t fill = 0x5A) { return KeyMaterial::FromBytes(Bytes(len, fill)); }

bool OnPolynomial(const VaultPoint& pt, const Polynomial& p) {
  return ffmath::PolyEval(p, pt.x) == pt.y;
}

TEST(SecurityParamsTest, Validate) {
  EXPECT_NO_THROW((SecurityParams{56, 200, 32}.Validate()));
  EXPECT_EQ(CodeOf([] { SecurityParams{1, 0, 1}.Validate(); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf([] { SecurityParams{5, 1, 0}.Validate(); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf([] { SecurityParams{5, 1, 5}.Validate(); }), ErrorCode::kInvalidParams);
}

TEST(EnrollTest, DefaultParametersGive256Points) {
  const auto key = Key();
  const SecurityParams sec{56, 200, 32};
  const Vault v = Enroll("app", SpacedCodes(56, 100, 1000), key, sec, thresholds::GlobalThreshold(), 1);
  EXPECT_EQ(v.points.size(), 256u);
  const Polynomial p = ffmath::KeyToCoeffs(key, 32);
  size_t on = 0;
  for (const auto& pt : v.points) {
    on += OnPolynomial(pt, p);
    EXPECT_LT(pt.x.value(), kCodeSpace);
    EXPECT_FALSE(pt.label);
  }
  EXPECT_EQ(on, 56u);
}

TEST(EnrollTest, DuplicateCodesAreDeduplicated) {
  auto e = SpacedCodes(10);
  e.codes[3] = e.codes[4];
  e.codes[7] = e.codes[4];
  const Vault v = Enroll("app", e, Key(8), {10, 20, 3}, thresholds::GlobalThreshold(), 2);
  EXPECT_EQ(v.points.size(), 8u + 20u);
}

TEST(EnrollTest, TooFewDistinctCodes) {
  EncodedVector same;
  same.codes.assign(56, 4242);
  EXPECT_EQ(CodeOf([&] {
              Enroll("app", same, Key(), {56, 200, 32}, thresholds::GlobalThreshold(), 1);
            }),
            ErrorCode::kTooFewDistinctCodes);
}

TEST(EnrollTest, ParameterErrors) {
  EXPECT_EQ(CodeOf([] { Enroll("a", SpacedCodes(1), Key(1), {1, 0, 1}, thresholds::GlobalThreshold(), 1); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf([] { Enroll("a", SpacedCodes(5), Key(), {6, 10, 2}, thresholds::GlobalThreshold(), 1); }),
            ErrorCode::kLengthMismatch);
  EXPECT_EQ(CodeOf([] { Enroll("a", SpacedCodes(6), Key(32), {6, 10, 2}, thresholds::GlobalThreshold(), 1); }),
            ErrorCode::kKeyTooLong);
}

TEST(EnrollTest, DeterministicInSeedAndShuffled) {
  const auto e = SpacedCodes(20);
  const auto a = Enroll("app", e, Key(), {20, 50, 5}, thresholds::GlobalThreshold(), 7);
  const auto b = Enroll("app", e, Key(), {20, 50, 5}, thresholds::GlobalThreshold(), 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, Enroll("app", e, Key(), {20, 50, 5}, thresholds::GlobalThreshold(), 8));
  // Genuine points are not simply emitted first.
  const Polynomial p = ffmath::KeyToCoeffs(Key(), 5);
  size_t leading = 0;
  while (leading < a.points.size() && OnPolynomial(a.points[leading], p)) ++leading;
  EXPECT_LT(leading, 20u);
}

TEST(GenerateChaffTest, SingleGenuinePoint) {
  const Polynomial p = ffmath::KeyToCoeffs(Key(4), 1);
  const std::vector<VaultPoint> genuine = {{FieldElement(100), ffmath::PolyEval(p, FieldElement(100)), {}}};
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto chaff = GenerateChaff(genuine, 3, thresholds::GlobalThreshold(57.5), p, rng);
    ASSERT_EQ(chaff.size(), 3u);
    for (const auto& c : chaff) {
      ASSERT_TRUE(c.x.value() < 42.5 || c.x.value() > 157.5) << c.x.value();
      ASSERT_FALSE(OnPolynomial(c, p));
    }
  }
}

TEST(GenerateChaffTest, ClosedRegionBoundary) {
  // With an integer tau the codes at exactly distance tau are excluded.
  const Polynomial p = ffmath::KeyToCoeffs(Key(4), 1);
  const std::vector<VaultPoint> genuine = {{FieldElement(30000), FieldElement(0), {}}};
  Rng rng(4);
  const auto chaff = GenerateChaff(genuine, 65536 - 2 * 30000 - 1 - 5000, thresholds::GlobalThreshold(30000), p, rng);
  for (const auto& c : chaff) ASSERT_GT(c.x.value(), 60000u);
}

TEST(GenerateChaffTest, ExhaustedSpace) {
  const Polynomial p = ffmath::KeyToCoeffs(Key(4), 1);
  const std::vector<VaultPoint> genuine = {{FieldElement(16000), FieldElement(1), {}},
                                           {FieldElement(50000), FieldElement(2), {}}};
  Rng rng(5);
  EXPECT_EQ(CodeOf([&] { GenerateChaff(genuine, 1, thresholds::GlobalThreshold(40000), p, rng); }),
            ErrorCode::kChaffSpaceExhausted);
}

TEST(GenerateChaffTest, PerFeatureLabels) {
  const Polynomial p = ffmath::KeyToCoeffs(Key(4), 1);
  const ThresholdScheme s(PerFeature{{10, 10, 10}});
  const auto genuine = GenuinePoints(SpacedCodes(3), s, p);
  ASSERT_EQ(genuine.size(), 3u);
  Rng rng(6);
  const auto chaff = GenerateChaff(genuine, 2, s, p, rng);
  std::vector<uint32_t> labels;
  for (const auto& c : chaff) labels.push_back(*c.label);
  std::sort(labels.begin(), labels.end());
  EXPECT_EQ(labels, (std::vector<uint32_t>{0, 0, 1, 1, 2, 2}));
}

TEST(EnrollTest, PerFeatureVaultShape) {
  const ThresholdScheme s(PerFeature{std::vector<double>(8, 20)});
  const auto e = SpacedCodes(8);
  const Vault v = Enroll("app", e, Key(10), {8, 4, 2}, s, 3);
  EXPECT_EQ(v.points.size(), 8u + 8u * 4u);
  std::set<std::pair<uint64_t, uint32_t>> seen;
  for (const auto& pt : v.points) {
    ASSERT_TRUE(pt.label);
    ASSERT_TRUE(seen.emplace(pt.x.value(), *pt.label).second);
  }
}

// Exhaustive invariant check over randomized enrollments: y = P(x) exactly
// for genuine points, chaff off P and outside the scheme's regions, unique
// (x, label), and the documented point count.
TEST(EnrollTest, InvariantsOverRandomEnrollments) {
  Rng rng(9);
  size_t chaff_checked = 0;
  for (int t = 0; t < 120; ++t) {
    const size_t n = 4 + rng.UniformBelow(40);
    const size_t d = 1 + rng.UniformBelow(n - 1);
    const size_t c = 1 + rng.UniformBelow(200);
    EncodedVector e;
    for (size_t i = 0; i < n; ++i) e.codes.push_back(static_cast<uint16_t>(rng.UniformBelow(65536)));
    const int kind = t % 3;
    std::vector<double> taus(n);
    for (auto& x : taus) x = rng.Uniform(0.5, 300);
    const ThresholdScheme s = kind == 0   ? thresholds::GlobalThreshold(taus[0])
                              : kind == 1 ? ThresholdScheme(thresholds::PerApp{taus[0]})
                                          : ThresholdScheme(PerFeature{taus});
    const auto key = Key(1 + rng.UniformBelow(std::min<size_t>(224, 7 * (d + 1) - 2)),
                         static_cast<uint8_t>(rng.NextU64()));
    Vault v;
    try {
      v = Enroll("app", e, key, {n, c, d}, s, rng.NextU64());
    } catch (const Error& err) {
      ASSERT_EQ(err.code(), ErrorCode::kTooFewDistinctCodes);
      continue;
    }
    const Polynomial p = ffmath::KeyToCoeffs(key, d);
    std::map<std::optional<uint32_t>, std::vector<uint64_t>> genuine_by_label;
    std::set<std::pair<uint64_t, int64_t>> keys;
    size_t genuine = 0;
    for (const auto& pt : v.points) {
      ASSERT_TRUE(keys.emplace(pt.x.value(), pt.label ? int64_t{*pt.label} : -1).second);
      if (OnPolynomial(pt, p)) {
        ++genuine;
        genuine_by_label[kind == 2 ? pt.label : std::nullopt].push_back(pt.x.value());
      }
    }
    std::set<uint16_t> distinct(e.codes.begin(), e.codes.end());
    ASSERT_EQ(genuine, kind == 2 ? n : distinct.size());
    ASSERT_EQ(v.points.size(), genuine + (kind == 2 ? n * c : c));
    for (const auto& pt : v.points) {
      if (OnPolynomial(pt, p)) continue;
      ++chaff_checked;
      const auto& centers = genuine_by_label[kind == 2 ? pt.label : std::nullopt];
      const double tau = kind == 2 ? taus[*pt.label] : taus[0];
      for (uint64_t g : centers) {
        ASSERT_GT(std::abs(static_cast<double>(pt.x.value()) - static_cast<double>(g)), tau);
      }
    }
  }
  EXPECT_GT(chaff_checked, 10000u);
}

TEST(SerializeTest, RoundTripIsByteExact) {
  const Vault v = Enroll("app-1", SpacedCodes(12), Key(20), {12, 30, 3}, thresholds::GlobalThreshold(), 4);
  const std::string s = SerializeVault(v);
  EXPECT_EQ(DeserializeVault(s), v);
  EXPECT_EQ(SerializeVault(DeserializeVault(s)), s);
  EXPECT_EQ(s.rfind(R"({"format_version":1,"app_id":"app-1","n":12,"c":30,"d":3,"scheme":"global","points":[{"x":)", 0), 0u);
  const Vault pf = Enroll("app-2", SpacedCodes(4), Key(4), {4, 2, 1}, ThresholdScheme(PerFeature{{5, 5, 5, 5}}), 4);
  EXPECT_EQ(DeserializeVault(SerializeVault(pf)), pf);
}

TEST(SerializeTest, NoKeyHashOrThresholdsInVault) {
  const auto key = Key();
  const Vault v = Enroll("app", SpacedCodes(40), key, {40, 100, 20}, thresholds::GlobalThreshold(57.5), 4);
  const std::string s = SerializeVault(v);
  EXPECT_EQ(s.find(ToHex(key.hash())), std::string::npos);
  EXPECT_EQ(s.find("57.5"), std::string::npos);
  EXPECT_EQ(s.find("tau"), std::string::npos);
}

TEST(SerializeTest, Errors) {
  const Vault v = Enroll("app", SpacedCodes(12), Key(20), {12, 30, 3}, thresholds::GlobalThreshold(), 4);
  const std::string s = SerializeVault(v);
  EXPECT_EQ(CodeOf([&] { DeserializeVault(s.substr(0, s.size() / 2)); }), ErrorCode::kSchemaError);
  EXPECT_EQ(CodeOf([] { DeserializeVault(""); }), ErrorCode::kSchemaError);
  auto j = nlohmann::json::parse(s);
  j["format_version"] = 2;
  EXPECT_EQ(CodeOf([&] { DeserializeVault(j.dump()); }), ErrorCode::kVersionMismatch);
  j = nlohmann::json::parse(s);
  // 42 points minus 9 is below the d + 1 + c minimum.
  for (int i = 0; i < 9; ++i) j["points"].erase(j["points"].begin());
  EXPECT_EQ(CodeOf([&] { DeserializeVault(j.dump()); }), ErrorCode::kSchemaError);
  j = nlohmann::json::parse(s);
  j["points"][1]["x"] = j["points"][0]["x"];
  EXPECT_EQ(CodeOf([&] { DeserializeVault(j.dump()); }), ErrorCode::kSchemaError);
  j = nlohmann::json::parse(s);
  j["points"][0]["x"] = 70000;
  EXPECT_EQ(CodeOf([&] { DeserializeVault(j.dump()); }), ErrorCode::kSchemaError);
  j = nlohmann::json::parse(s);
  j["points"][0]["label"] = 0;
  EXPECT_EQ(CodeOf([&] { DeserializeVault(j.dump()); }), ErrorCode::kSchemaError);
}

TEST(SerializeTest, FileRoundTrip) {
  testing_util::TempDir dir;
  const Vault v = Enroll("app", SpacedCodes(12), Key(20), {12, 30, 3}, thresholds::GlobalThreshold(), 4);
  SaveVault(v, dir.File("v.json"));
  EXPECT_EQ(LoadVault(dir.File("v.json")), v);
  EXPECT_EQ(CodeOf([&] { LoadVault(dir.File("missing.json")); }), ErrorCode::kIo);
}

}  // namespace
}  // namespace baafe::vault
