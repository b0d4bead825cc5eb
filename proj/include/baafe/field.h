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

#ifndef BAAFE_FIELD_H_
#define BAAFE_FIELD_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace baafe::ffmath {

// Element of the prime field GF(2^61 - 1).
class FieldElement {
 public:
  static constexpr uint64_t kModulus = (uint64_t{1} << 61) - 1;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(uint64_t v) : value_(Reduce(v)) {}

  constexpr uint64_t value() const { return value_; }
  constexpr bool IsZero() const { return value_ == 0; }

  friend constexpr FieldElement operator+(FieldElement a, FieldElement b) {
    uint64_t s = a.value_ + b.value_;  // < 2^62, no overflow
    return FromReduced(s >= kModulus ? s - kModulus : s);
  }
  friend constexpr FieldElement operator-(FieldElement a, FieldElement b) {
    return FromReduced(a.value_ >= b.value_ ? a.value_ - b.value_
                                            : a.value_ + kModulus - b.value_);
  }
  friend constexpr FieldElement operator-(FieldElement a) {
    return FromReduced(a.value_ == 0 ? 0 : kModulus - a.value_);
  }
  friend constexpr FieldElement operator*(FieldElement a, FieldElement b) {
    unsigned __int128 z = static_cast<unsigned __int128>(a.value_) * b.value_;
    uint64_t lo = static_cast<uint64_t>(z) & kModulus;
    uint64_t hi = static_cast<uint64_t>(z >> 61);
    uint64_t s = lo + hi;
    return FromReduced(s >= kModulus ? s - kModulus : s);
  }
  FieldElement& operator+=(FieldElement o) { return *this = *this + o; }
  FieldElement& operator-=(FieldElement o) { return *this = *this - o; }
  FieldElement& operator*=(FieldElement o) { return *this = *this * o; }

  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;

  FieldElement Pow(uint64_t exponent) const;
  // Multiplicative inverse; throws std::domain_error for zero.
  FieldElement Inverse() const;

  // Lowercase hex of the canonical value without leading zeros ("0" for 0).
  std::string ToHex() const;
  // Rejects empty strings, non-hex digits and values >= kModulus.
  static std::optional<FieldElement> FromHex(std::string_view hex);

 private:
  static constexpr uint64_t Reduce(uint64_t v) {
    uint64_t r = (v & kModulus) + (v >> 61);
    return r >= kModulus ? r - kModulus : r;
  }
  static constexpr FieldElement FromReduced(uint64_t v) {
    FieldElement e;
    e.value_ = v;
    return e;
  }

  uint64_t value_ = 0;
};

}  // namespace baafe::ffmath

#endif  // BAAFE_FIELD_H_
