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

#ifndef BAAFE_KEY_CODEC_H_
#define BAAFE_KEY_CODEC_H_

#include <cstddef>
#include <optional>
#include <span>

#include "baafe/crypto.h"
#include "baafe/polynomial.h"

namespace baafe::ffmath {

// Octets of payload carried by one coefficient; 7 * 8 = 56 bits < 61.
inline constexpr size_t kPayloadBytesPerCoefficient = 7;
inline constexpr size_t kKeyLengthHeaderBytes = 2;
inline constexpr size_t kMaxKeyBytes = 224;

// Authentication key together with its SHA-256 digest.
class KeyMaterial {
 public:
  // Throws kInvalidKey unless 1 <= bytes.size() <= kMaxKeyBytes.
  static KeyMaterial FromBytes(Bytes bytes);
  // As FromBytes, and additionally verifies that hash == SHA-256(bytes).
  KeyMaterial(Bytes bytes, const Digest& hash);

  // Fresh random key from the system CSPRNG.
  static KeyMaterial Generate(size_t length);

  const Bytes& bytes() const { return bytes_; }
  const Digest& hash() const { return hash_; }

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;

 private:
  KeyMaterial() = default;

  Bytes bytes_;
  Digest hash_{};
};

// Smallest degree whose d + 1 coefficients can carry a key of this length.
size_t MinDegreeForKey(size_t key_length);

// Layout: 2-octet big-endian length, key octets, zero padding; cut into d + 1
// big-endian 7-octet chunks, chunk i becoming coefficient c_i.
// Throws kKeyTooLong when the key does not fit.
Polynomial KeyToCoeffs(const KeyMaterial& key, size_t degree);
// Same layout over raw octets. The capacity check runs before any length
// policy, so oversized input reports kKeyTooLong; empty input is kInvalidKey.
Polynomial KeyBytesToCoeffs(std::span<const uint8_t> key, size_t degree);

// Inverse of KeyToCoeffs. Throws kMalformedShares on an invalid layout.
KeyMaterial CoeffsToKey(const Polynomial& p);

// Non-throwing decoder for the reconstruction hot loop.
std::optional<KeyMaterial> TryCoeffsToKey(std::span<const FieldElement> coeffs);

}  // namespace baafe::ffmath

#endif  // BAAFE_KEY_CODEC_H_
