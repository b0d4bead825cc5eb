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

#include "baafe/polynomial.h"

#include <stdexcept>
#include <string>

#include "baafe/error.h"

namespace baafe::ffmath {

Polynomial::Polynomial(std::vector<FieldElement> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("polynomial needs at least one coefficient");
}

Polynomial Polynomial::Zero(size_t degree) {
  return Polynomial(std::vector<FieldElement>(degree + 1));
}

FieldElement PolyEval(std::span<const FieldElement> coeffs, FieldElement x) {
  FieldElement acc;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

FieldElement PolyEval(const Polynomial& p, FieldElement x) { return PolyEval(p.coeffs(), x); }

nlohmann::json PolynomialToJson(const Polynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const FieldElement& c : p.coeffs()) out.push_back(c.ToHex());
  return out;
}

Polynomial PolynomialFromJson(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kSchemaError, "polynomial must be a nonempty array");
  }
  std::vector<FieldElement> coeffs;
  for (const auto& e : j) {
    auto c = e.is_string() ? FieldElement::FromHex(e.get<std::string>()) : std::nullopt;
    if (!c) throw Error(ErrorCode::kSchemaError, "bad polynomial coefficient");
    coeffs.push_back(*c);
  }
  return Polynomial(std::move(coeffs));
}

Interpolator::Interpolator(size_t degree)
    : degree_(degree), denom_(degree + 1), prefix_(degree + 2), master_(degree + 2) {}

bool Interpolator::Interpolate(std::span<const Point> points, std::vector<FieldElement>& coeffs) {
  const size_t k = degree_ + 1;
  coeffs.assign(k, FieldElement());

  // denom_i = prod_{j != i} (x_i - x_j); a zero factor means a repeated x.
  for (size_t i = 0; i < k; ++i) {
    FieldElement d(1);
    for (size_t j = 0; j < k; ++j) {
      if (j != i) d *= points[i].x - points[j].x;
    }
    if (d.IsZero()) return false;
    denom_[i] = d;
  }

  // Batch inversion: one field inverse for all denominators.
  prefix_[0] = FieldElement(1);
  for (size_t i = 0; i < k; ++i) prefix_[i + 1] = prefix_[i] * denom_[i];
  FieldElement inv = prefix_[k].Inverse();
  for (size_t i = k; i-- > 0;) {
    FieldElement inv_i = inv * prefix_[i];
    inv *= denom_[i];
    denom_[i] = inv_i * points[i].y;  // weight w_i = y_i / denom_i
  }

  // master(x) = prod_j (x - x_j), degree k.
  std::fill(master_.begin(), master_.end(), FieldElement());
  master_[0] = FieldElement(1);
  for (size_t j = 0; j < k; ++j) {
    const FieldElement neg = -points[j].x;
    for (size_t t = j + 1; t > 0; --t) master_[t] = master_[t - 1] + neg * master_[t];
    master_[0] = neg * master_[0];
  }

  // Sum of w_i * master(x) / (x - x_i), via synthetic division.
  for (size_t i = 0; i < k; ++i) {
    const FieldElement xi = points[i].x;
    const FieldElement w = denom_[i];
    FieldElement q = master_[k];
    coeffs[k - 1] += w * q;
    for (size_t t = k - 1; t > 0; --t) {
      q = master_[t] + xi * q;
      coeffs[t - 1] += w * q;
    }
  }
  return true;
}

Polynomial LagrangeInterpolate(std::span<const Point> points, size_t degree) {
  if (points.size() != degree + 1) {
    throw Error(ErrorCode::kWrongCount, "interpolation of degree " + std::to_string(degree) +
                                            " needs " + std::to_string(degree + 1) +
                                            " points, got " + std::to_string(points.size()));
  }
  Interpolator interp(degree);
  std::vector<FieldElement> coeffs;
  if (!interp.Interpolate(points, coeffs)) {
    throw Error(ErrorCode::kDuplicateX, "interpolation points share an x-coordinate");
  }
  return Polynomial(std::move(coeffs));
}

}  // namespace baafe::ffmath
