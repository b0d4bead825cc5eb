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

#include "baafe/vault.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "baafe/error.h"
#include "nlohmann/json.hpp"

namespace baafe::vault {
namespace {

using ffmath::FieldElement;
using thresholds::SchemeKind;
using Interval = std::pair<int64_t, int64_t>;  // closed, within [0, kCodeSpace)

// Integer codes x with |x - center| <= tau.
Interval Region(uint64_t center, double tau) {
  const auto c = static_cast<double>(center);
  const auto lo = static_cast<int64_t>(std::ceil(c - tau));
  const auto hi = static_cast<int64_t>(std::floor(c + tau));
  return {std::max<int64_t>(lo, 0), std::min<int64_t>(hi, kCodeSpace - 1)};
}

std::vector<Interval> Merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + 1) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

bool Covered(const std::vector<Interval>& merged, int64_t x) {
  auto it = std::upper_bound(merged.begin(), merged.end(), Interval{x, INT64_MAX});
  return it != merged.begin() && std::prev(it)->second >= x;
}

int64_t CoveredCount(const std::vector<Interval>& merged) {
  int64_t n = 0;
  for (const auto& iv : merged) n += iv.second - iv.first + 1;
  return n;
}

FieldElement RandomOffPolynomial(const ffmath::Polynomial& p, FieldElement x, Rng& rng) {
  const FieldElement on = ffmath::PolyEval(p, x);
  FieldElement y;
  do {
    y = FieldElement(rng.UniformBelow(FieldElement::kModulus));
  } while (y == on);
  return y;
}

// Draws `count` distinct x outside `forbidden`, appending points to `out`.
void DrawChaff(const std::vector<Interval>& forbidden, size_t count,
               std::optional<uint32_t> label, const ffmath::Polynomial& p, Rng& rng,
               std::vector<VaultPoint>& out) {
  if (kCodeSpace - CoveredCount(forbidden) < static_cast<int64_t>(count)) {
    throw Error(ErrorCode::kChaffSpaceExhausted,
                "threshold regions leave fewer than " + std::to_string(count) + " free codes");
  }
  std::vector<bool> used(kCodeSpace, false);
  size_t made = 0;
  int rejections = 0;
  while (made < count) {
    const auto x = static_cast<int64_t>(rng.UniformBelow(kCodeSpace));
    if (Covered(forbidden, x) || used[x]) {
      if (++rejections >= kMaxConsecutiveChaffRejections) {
        throw Error(ErrorCode::kChaffSpaceExhausted,
                    std::to_string(kMaxConsecutiveChaffRejections) + " consecutive rejections");
      }
      continue;
    }
    rejections = 0;
    used[x] = true;
    const FieldElement fx(static_cast<uint64_t>(x));
    out.push_back({fx, RandomOffPolynomial(p, fx, rng), label});
    ++made;
  }
}

[[noreturn]] void SchemaFail(const std::string& what) {
  throw Error(ErrorCode::kSchemaError, what);
}

}  // namespace

void SecurityParams::Validate() const {
  if (d < 1) throw Error(ErrorCode::kInvalidParams, "degree must be >= 1");
  if (c < 1) throw Error(ErrorCode::kInvalidParams, "chaff count must be >= 1");
  if (n < d + 1) {
    throw Error(ErrorCode::kInvalidParams, "n = " + std::to_string(n) + " < d + 1 = " +
                                               std::to_string(d + 1));
  }
}

std::vector<VaultPoint> GenuinePoints(const encoder::EncodedVector& encoded,
                                      const thresholds::ThresholdScheme& scheme,
                                      const ffmath::Polynomial& p) {
  std::vector<VaultPoint> out;
  if (scheme.kind() == SchemeKind::kPerFeature) {
    for (size_t i = 0; i < encoded.codes.size(); ++i) {
      const FieldElement x(encoded.codes[i]);
      out.push_back({x, ffmath::PolyEval(p, x), static_cast<uint32_t>(i)});
    }
    return out;
  }
  std::vector<bool> seen(kCodeSpace, false);
  for (uint16_t code : encoded.codes) {
    if (seen[code]) continue;
    seen[code] = true;
    const FieldElement x(code);
    out.push_back({x, ffmath::PolyEval(p, x), std::nullopt});
  }
  return out;
}

std::vector<VaultPoint> GenerateChaff(std::span<const VaultPoint> genuine, size_t c,
                                      const thresholds::ThresholdScheme& scheme,
                                      const ffmath::Polynomial& p, Rng& rng) {
  std::vector<VaultPoint> out;
  if (scheme.kind() == SchemeKind::kPerFeature) {
    // Each feature's chaff only avoids that feature's own genuine point.
    out.reserve(genuine.size() * c);
    for (const auto& g : genuine) {
      if (!g.label) throw Error(ErrorCode::kInvalidParams, "per-feature genuine point lacks label");
      const std::vector<Interval> forbidden = {Region(g.x.value(), scheme.TauFor(*g.label))};
      DrawChaff(forbidden, c, g.label, p, rng, out);
    }
    return out;
  }
  std::vector<Interval> regions;
  regions.reserve(genuine.size());
  const double tau = scheme.TauFor(0);
  for (const auto& g : genuine) regions.push_back(Region(g.x.value(), tau));
  out.reserve(c);
  DrawChaff(Merge(std::move(regions)), c, std::nullopt, p, rng, out);
  return out;
}

Vault Enroll(const std::string& app_id, const encoder::EncodedVector& encoded,
             const ffmath::KeyMaterial& key, const SecurityParams& sec,
             const thresholds::ThresholdScheme& scheme, uint64_t seed) {
  sec.Validate();
  if (encoded.codes.size() != sec.n) {
    throw Error(ErrorCode::kLengthMismatch, "encoded vector has " +
                                                std::to_string(encoded.codes.size()) +
                                                " codes, n = " + std::to_string(sec.n));
  }
  if (scheme.kind() == SchemeKind::kPerFeature &&
      std::get<thresholds::PerFeature>(scheme.variant()).tau.size() != sec.n) {
    throw Error(ErrorCode::kInvalidParams, "per-feature threshold count differs from n");
  }
  const ffmath::Polynomial p = ffmath::KeyToCoeffs(key, sec.d);

  std::vector<VaultPoint> points = GenuinePoints(encoded, scheme, p);
  std::set<uint64_t> distinct;
  for (const auto& g : points) distinct.insert(g.x.value());
  if (distinct.size() < sec.d + 1) {
    throw Error(ErrorCode::kTooFewDistinctCodes, std::to_string(distinct.size()) +
                                                     " distinct codes, need " +
                                                     std::to_string(sec.d + 1));
  }

  Rng rng(seed);
  std::vector<VaultPoint> chaff = GenerateChaff(points, sec.c, scheme, p, rng);
  points.insert(points.end(), chaff.begin(), chaff.end());
  rng.Shuffle(points.begin(), points.end());
  return Vault{app_id, std::move(points), sec, scheme.kind(), kVaultFormatVersion};
}

std::string SerializeVault(const Vault& v) {
  nlohmann::ordered_json j;
  j["format_version"] = v.format_version;
  j["app_id"] = v.app_id;
  j["n"] = v.sec.n;
  j["c"] = v.sec.c;
  j["d"] = v.sec.d;
  j["scheme"] = thresholds::SchemeKindName(v.scheme);
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : v.points) {
    nlohmann::ordered_json o;
    o["x"] = p.x.value();
    o["y"] = p.y.ToHex();
    o["label"] = p.label ? nlohmann::ordered_json(*p.label) : nlohmann::ordered_json(nullptr);
    pts.push_back(std::move(o));
  }
  return j.dump();
}

Vault DeserializeVault(std::string_view bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    SchemaFail(std::string("vault is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) SchemaFail("vault must be a JSON object");
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    SchemaFail("missing format_version");
  }
  const int version = j["format_version"].get<int>();
  if (version != kVaultFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "vault format " + std::to_string(version) + ", supported " +
                    std::to_string(kVaultFormatVersion));
  }
  for (const char* f : {"n", "c", "d"}) {
    if (!j.contains(f) || !j[f].is_number_unsigned()) SchemaFail(std::string("bad field ") + f);
  }
  if (!j.contains("app_id") || !j["app_id"].is_string()) SchemaFail("bad app_id");
  if (!j.contains("scheme") || !j["scheme"].is_string()) SchemaFail("bad scheme");
  if (!j.contains("points") || !j["points"].is_array()) SchemaFail("bad points");

  Vault v;
  v.format_version = version;
  v.app_id = j["app_id"].get<std::string>();
  v.sec = {j["n"].get<size_t>(), j["c"].get<size_t>(), j["d"].get<size_t>()};
  try {
    v.sec.Validate();
    v.scheme = thresholds::ParseSchemeKind(j["scheme"].get<std::string>());
  } catch (const Error& e) {
    SchemaFail(e.what());
  }
  const bool labeled = v.scheme == SchemeKind::kPerFeature;

  std::set<std::pair<uint64_t, int64_t>> keys;
  for (const auto& p : j["points"]) {
    if (!p.is_object() || !p.contains("x") || !p.contains("y") || !p.contains("label")) {
      SchemaFail("point needs x, y and label");
    }
    if (!p["x"].is_number_unsigned() || p["x"].get<uint64_t>() >= kCodeSpace) {
      SchemaFail("point x must be an integer in [0, 65535]");
    }
    auto y = p["y"].is_string() ? FieldElement::FromHex(p["y"].get<std::string>()) : std::nullopt;
    if (!y) SchemaFail("point y must be a hex field element");
    VaultPoint vp{FieldElement(p["x"].get<uint64_t>()), *y, std::nullopt};
    if (p["label"].is_null()) {
      if (labeled) SchemaFail("per_feature vault point lacks a label");
    } else {
      if (!labeled) SchemaFail("label present in a non per_feature vault");
      if (!p["label"].is_number_unsigned() || p["label"].get<uint64_t>() >= v.sec.n) {
        SchemaFail("label out of range");
      }
      vp.label = p["label"].get<uint32_t>();
    }
    if (!keys.emplace(vp.x.value(), vp.label ? int64_t{*vp.label} : -1).second) {
      SchemaFail("two points share (x, label)");
    }
    v.points.push_back(vp);
  }
  const size_t count = v.points.size();
  if (labeled ? count != v.sec.n + v.sec.n * v.sec.c
              : (count < v.sec.d + 1 + v.sec.c || count > v.sec.n + v.sec.c)) {
    SchemaFail("point count " + std::to_string(count) + " inconsistent with n, c, d");
  }
  return v;
}

void SaveVault(const Vault& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << SerializeVault(v);
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path);
}

Vault LoadVault(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return DeserializeVault(ss.str());
}

}  // namespace baafe::vault
