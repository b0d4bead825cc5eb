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

#ifndef BAAFE_POLYNOMIAL_H_
#define BAAFE_POLYNOMIAL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "baafe/field.h"
#include "nlohmann/json.hpp"

namespace baafe::ffmath {

struct Point {
  FieldElement x;
  FieldElement y;
};

// Nominal-degree polynomial: coeffs()[i] is the coefficient of x^i and the
// length is always degree + 1, even when leading coefficients are zero.
class Polynomial {
 public:
  explicit Polynomial(std::vector<FieldElement> coeffs);
  static Polynomial Zero(size_t degree);

  size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<FieldElement> coeffs_;
};

// Array of lowercase hex coefficients, lowest degree first. Test fixtures
// only; production vaults never carry coefficients.
nlohmann::json PolynomialToJson(const Polynomial& p);
// Throws kSchemaError.
Polynomial PolynomialFromJson(const nlohmann::json& j);

// Horner evaluation.
FieldElement PolyEval(const Polynomial& p, FieldElement x);
FieldElement PolyEval(std::span<const FieldElement> coeffs, FieldElement x);

// Unique polynomial of nominal degree `degree` through exactly degree + 1
// points. Throws kWrongCount or kDuplicateX.
Polynomial LagrangeInterpolate(std::span<const Point> points, size_t degree);

// Allocation-free interpolation for repeated use at a fixed degree. Returns
// false (leaving `coeffs` unspecified) when two x-coordinates coincide.
class Interpolator {
 public:
  explicit Interpolator(size_t degree);

  size_t degree() const { return degree_; }
  bool Interpolate(std::span<const Point> points, std::vector<FieldElement>& coeffs);

 private:
  size_t degree_;
  std::vector<FieldElement> denom_;
  std::vector<FieldElement> prefix_;
  std::vector<FieldElement> master_;
};

}  // namespace baafe::ffmath

#endif  // BAAFE_POLYNOMIAL_H_
