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

#include "baafe/field.h"

#include <stdexcept>

namespace baafe::ffmath {

FieldElement FieldElement::Pow(uint64_t exponent) const {
  FieldElement result(1);
  FieldElement base = *this;
  while (exponent != 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

FieldElement FieldElement::Inverse() const {
  if (IsZero()) throw std::domain_error("inverse of zero field element");
  return Pow(kModulus - 2);
}

std::string FieldElement::ToHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  if (value_ == 0) return "0";
  std::string out;
  for (uint64_t v = value_; v != 0; v >>= 4) out.insert(out.begin(), kDigits[v & 0xf]);
  return out;
}

std::optional<FieldElement> FieldElement::FromHex(std::string_view hex) {
  if (hex.empty() || hex.size() > 16) return std::nullopt;
  uint64_t v = 0;
  for (char c : hex) {
    int d;
    if (c >= '0' && c <= '9') {
      d = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      d = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      d = c - 'A' + 10;
    } else {
      return std::nullopt;
    }
    v = (v << 4) | static_cast<uint64_t>(d);
  }
  if (v >= kModulus) return std::nullopt;
  return FieldElement(v);
}

}  // namespace baafe::ffmath
