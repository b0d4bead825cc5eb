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

#include "baafe/encoder.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "baafe/crypto.h"
#include "baafe/error.h"
#include "baafe/random.h"

namespace baafe::encoder {
namespace {

using nlohmann::json;

constexpr int kOrthonormalizeRetries = 3;
constexpr double kPivotTolerance = 1e-10;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Returns false on a
// numerically zero pivot.
bool Orthonormalize(Matrix& m) {
  const size_t n = m.size();
  for (size_t j = 0; j < n; ++j) {
    auto v = m.column(j);
    const double original = std::sqrt(Dot(v, v));
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t i = 0; i < j; ++i) {
        auto q = m.column(i);
        const double proj = Dot(q, v);
        for (size_t r = 0; r < n; ++r) v[r] -= proj * q[r];
      }
    }
    const double norm = std::sqrt(Dot(v, v));
    if (!(norm > kPivotTolerance * original) || original == 0) return false;
    for (double& x : v) x /= norm;
  }
  return true;
}

void FillGaussian(Matrix& m, Rng& rng) {
  for (size_t c = 0; c < m.size(); ++c) {
    for (double& x : m.column(c)) x = rng.Gaussian();
  }
}

double Distance(std::span<const double> v, std::span<const double> col) {
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - col[i];
    s += d * d;
  }
  return std::sqrt(s);
}

int Quantize(double distance, double d_max) {
  const double b = std::floor(kQuantizationSteps * distance / d_max);
  return static_cast<int>(std::clamp(b, 0.0, static_cast<double>(kQuantizationSteps - 1)));
}

void AppendBits(Bytes& out, double v) {
  uint64_t bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(bits >> (8 * i)));
}

}  // namespace

std::string NormalizationSchemeName(NormalizationScheme s) {
  return s == NormalizationScheme::kL1 ? "l1" : "minmax";
}

NormalizationScheme ParseNormalizationScheme(const std::string& name) {
  if (name == "l1") return NormalizationScheme::kL1;
  if (name == "minmax") return NormalizationScheme::kMinMax;
  throw Error(ErrorCode::kInvalidConfig, "unknown normalization '" + name + "'");
}

NormalizationParams CalibrateNormalization(std::span<const behavior::FeatureVector> history,
                                           NormalizationScheme scheme) {
  if (history.empty()) throw Error(ErrorCode::kEmptyHistory, "normalization history is empty");
  NormalizationParams p;
  p.scheme = scheme;
  if (scheme == NormalizationScheme::kL1) return p;
  const size_t n = history.front().values.size();
  p.min = history.front().values;
  p.max = history.front().values;
  for (const auto& fv : history) {
    if (fv.values.size() != n) throw Error(ErrorCode::kLengthMismatch, "history lengths differ");
    for (size_t i = 0; i < n; ++i) {
      p.min[i] = std::min(p.min[i], fv.values[i]);
      p.max[i] = std::max(p.max[i], fv.values[i]);
    }
  }
  return p;
}

std::vector<double> Normalize(const behavior::FeatureVector& fv, const NormalizationParams& p) {
  const auto& v = fv.values;
  std::vector<double> out(v.size());
  if (p.scheme == NormalizationScheme::kL1) {
    double total = 0;
    for (double x : v) total += std::abs(x);
    if (total == 0) return out;
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i] / total;
    return out;
  }
  if (p.min.size() != v.size() || p.max.size() != v.size()) {
    throw Error(ErrorCode::kLengthMismatch, "normalization params do not match vector length");
  }
  for (size_t i = 0; i < v.size(); ++i) {
    const double span = p.max[i] - p.min[i];
    out[i] = span > 0 ? std::clamp((v[i] - p.min[i]) / span, 0.0, 1.0) : 0.5;
  }
  return out;
}

EncoderParams GenerateEncoderParams(uint64_t seed, size_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidParams, "encoder dimension must be >= 1");
  for (int attempt = 0; attempt <= kOrthonormalizeRetries; ++attempt) {
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(attempt)));
    EncoderParams p;
    p.n = n;
    p.seed = seed;
    p.r1_matrix = Matrix(n);
    p.r2_matrix = Matrix(n);
    FillGaussian(p.r1_matrix, rng);
    FillGaussian(p.r2_matrix, rng);
    if (!Orthonormalize(p.r1_matrix) || !Orthonormalize(p.r2_matrix)) continue;
    p.r1.resize(n);
    p.r2.resize(n);
    for (double& x : p.r1) x = rng.Uniform(0.5, 1.5);
    for (double& x : p.r2) x = rng.Uniform(0.5, 1.5);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (size_t j = 0; j < n; ++j) {
      for (double& x : p.r1_matrix.column(j)) x *= p.r1[j];
      for (double& x : p.r2_matrix.column(j)) x *= p.r2[j];
      auto c1 = p.r1_matrix.column(j);
      auto c2 = p.r2_matrix.column(j);
      p.d_max = std::max({p.d_max, std::sqrt(Dot(c1, c1)) + sqrt_n, std::sqrt(Dot(c2, c2)) + sqrt_n});
    }
    return p;
  }
  throw Error(ErrorCode::kDegenerateMatrix, "Gram-Schmidt hit a zero pivot on every retry");
}

EncodedVector Encode(std::span<const double> normalized, const EncoderParams& p) {
  if (normalized.size() != p.n) {
    throw Error(ErrorCode::kLengthMismatch, "encoder expects " + std::to_string(p.n) +
                                                " values, got " + std::to_string(normalized.size()));
  }
  EncodedVector out;
  out.codes.resize(p.n);
  for (size_t j = 0; j < p.n; ++j) {
    const int b1 = Quantize(Distance(normalized, p.r1_matrix.column(j)), p.d_max);
    const int b2 = Quantize(Distance(normalized, p.r2_matrix.column(j)), p.d_max);
    out.codes[j] = static_cast<uint16_t>((b1 << 8) | b2);
  }
  return out;
}

std::string MatrixContentHash(const EncoderParams& p) {
  Bytes buf;
  buf.reserve(16 * p.n * p.n);
  for (double v : p.r1_matrix.data()) AppendBits(buf, v);
  for (double v : p.r2_matrix.data()) AppendBits(buf, v);
  const Digest d = Sha256(buf);
  return ToHex(d);
}

json ToJson(const NormalizationParams& p) {
  json j = {{"scheme", NormalizationSchemeName(p.scheme)}};
  if (p.scheme == NormalizationScheme::kMinMax) {
    j["min"] = p.min;
    j["max"] = p.max;
  }
  return j;
}

NormalizationParams NormalizationFromJson(const json& j) {
  NormalizationParams p;
  p.scheme = ParseNormalizationScheme(j.at("scheme").get<std::string>());
  if (p.scheme == NormalizationScheme::kMinMax) {
    p.min = j.at("min").get<std::vector<double>>();
    p.max = j.at("max").get<std::vector<double>>();
    if (p.min.size() != p.max.size()) {
      throw Error(ErrorCode::kSchemaError, "normalization min/max lengths differ");
    }
    for (size_t i = 0; i < p.min.size(); ++i) {
      if (p.min[i] > p.max[i]) throw Error(ErrorCode::kSchemaError, "normalization min > max");
    }
  }
  return p;
}

json ToJson(const EncoderParams& p) {
  return {{"seed", p.seed},   {"n", p.n},   {"d_max", p.d_max},
          {"r1", p.r1},       {"r2", p.r2}, {"matrix_hash", MatrixContentHash(p)}};
}

EncoderParams EncoderFromJson(const json& j) {
  const auto seed = j.at("seed").get<uint64_t>();
  const auto n = j.at("n").get<size_t>();
  EncoderParams p = GenerateEncoderParams(seed, n);
  if (MatrixContentHash(p) != j.at("matrix_hash").get<std::string>() ||
      p.d_max != j.at("d_max").get<double>() ||
      p.r1 != j.at("r1").get<std::vector<double>>() ||
      p.r2 != j.at("r2").get<std::vector<double>>()) {
    throw Error(ErrorCode::kGeneratorDrift,
                "regenerated encoder matrices differ from the stored fingerprint");
  }
  return p;
}

}  // namespace baafe::encoder
