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

#ifndef BAAFE_ENCODER_H_
#define BAAFE_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "baafe/behavior.h"
#include "nlohmann/json.hpp"

namespace baafe::encoder {

enum class NormalizationScheme { kL1, kMinMax };

std::string NormalizationSchemeName(NormalizationScheme s);
NormalizationScheme ParseNormalizationScheme(const std::string& name);

struct NormalizationParams {
  NormalizationScheme scheme = NormalizationScheme::kMinMax;
  std::vector<double> min;  // MinMax only
  std::vector<double> max;  // MinMax only
};

// Square matrix stored column-major; columns are the unit of interest here.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(size_t n) : n_(n), data_(n * n, 0.0) {}

  size_t size() const { return n_; }
  double& at(size_t row, size_t col) { return data_[col * n_ + row]; }
  double at(size_t row, size_t col) const { return data_[col * n_ + row]; }
  std::span<double> column(size_t col) { return {data_.data() + col * n_, n_}; }
  std::span<const double> column(size_t col) const { return {data_.data() + col * n_, n_}; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  size_t n_ = 0;
  std::vector<double> data_;
};

// Per-application encoder state. R1/R2 columns are pairwise orthogonal with
// norms |r1[j]| / |r2[j]|, and everything is reproducible from (seed, n).
struct EncoderParams {
  size_t n = 0;
  uint64_t seed = 0;
  Matrix r1_matrix;
  Matrix r2_matrix;
  std::vector<double> r1;
  std::vector<double> r2;
  double d_max = 0;
};

// n codes, code_j = (b1_j << 8) | b2_j.
struct EncodedVector {
  std::vector<uint16_t> codes;

  friend bool operator==(const EncodedVector&, const EncodedVector&) = default;
};

inline constexpr int kQuantizationSteps = 256;

NormalizationParams CalibrateNormalization(std::span<const behavior::FeatureVector> history,
                                           NormalizationScheme scheme);

// Maps a feature vector into [0, 1]^n.
std::vector<double> Normalize(const behavior::FeatureVector& fv, const NormalizationParams& p);

// Two Gaussian matrices orthonormalized by modified Gram-Schmidt, columns
// scaled by r ~ U[0.5, 1.5]; d_max bounds every distance from [0,1]^n.
EncoderParams GenerateEncoderParams(uint64_t seed, size_t n);

EncodedVector Encode(std::span<const double> normalized, const EncoderParams& p);

inline double CodeDistance(uint16_t a, uint16_t b) {
  return a > b ? static_cast<double>(a - b) : static_cast<double>(b - a);
}

// Hex SHA-256 over the IEEE-754 bits of R1 then R2 (column-major, LE).
std::string MatrixContentHash(const EncoderParams& p);

nlohmann::json ToJson(const NormalizationParams& p);
NormalizationParams NormalizationFromJson(const nlohmann::json& j);

// Persists seed, n, d_max, r1, r2 and the matrix hash. Loading regenerates
// the matrices and throws kGeneratorDrift if anything differs.
nlohmann::json ToJson(const EncoderParams& p);
EncoderParams EncoderFromJson(const nlohmann::json& j);

}  // namespace baafe::encoder

#endif  // BAAFE_ENCODER_H_
