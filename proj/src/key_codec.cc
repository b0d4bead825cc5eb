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

#include "baafe/key_codec.h"

#include <string>
#include <utility>

#include "baafe/error.h"

namespace baafe::ffmath {
namespace {

constexpr uint64_t kChunkLimit = uint64_t{1} << (8 * kPayloadBytesPerCoefficient);

void CheckKeyLength(size_t length) {
  if (length == 0 || length > kMaxKeyBytes) {
    throw Error(ErrorCode::kInvalidKey,
                "key length " + std::to_string(length) + " outside [1, " +
                    std::to_string(kMaxKeyBytes) + "]");
  }
}

}  // namespace

KeyMaterial KeyMaterial::FromBytes(Bytes bytes) {
  CheckKeyLength(bytes.size());
  KeyMaterial k;
  k.hash_ = Sha256(bytes);
  k.bytes_ = std::move(bytes);
  return k;
}

KeyMaterial::KeyMaterial(Bytes bytes, const Digest& hash) {
  CheckKeyLength(bytes.size());
  if (Sha256(bytes) != hash) throw Error(ErrorCode::kInvalidKey, "key hash mismatch");
  bytes_ = std::move(bytes);
  hash_ = hash;
}

KeyMaterial KeyMaterial::Generate(size_t length) { return FromBytes(RandomBytes(length)); }

size_t MinDegreeForKey(size_t key_length) {
  const size_t total = key_length + kKeyLengthHeaderBytes;
  const size_t chunks = (total + kPayloadBytesPerCoefficient - 1) / kPayloadBytesPerCoefficient;
  return chunks == 0 ? 0 : chunks - 1;
}

Polynomial KeyToCoeffs(const KeyMaterial& key, size_t degree) {
  return KeyBytesToCoeffs(key.bytes(), degree);
}

Polynomial KeyBytesToCoeffs(std::span<const uint8_t> key, size_t degree) {
  if (key.empty()) throw Error(ErrorCode::kInvalidKey, "key is empty");
  const size_t capacity = (degree + 1) * kPayloadBytesPerCoefficient;
  const size_t needed = key.size() + kKeyLengthHeaderBytes;
  if (needed > capacity || key.size() > 0xffff) {
    throw Error(ErrorCode::kKeyTooLong, std::to_string(needed) + " > " + std::to_string(capacity));
  }
  Bytes buf(capacity, 0);
  buf[0] = static_cast<uint8_t>(key.size() >> 8);
  buf[1] = static_cast<uint8_t>(key.size() & 0xff);
  std::copy(key.begin(), key.end(), buf.begin() + kKeyLengthHeaderBytes);

  std::vector<FieldElement> coeffs(degree + 1);
  for (size_t i = 0; i <= degree; ++i) {
    uint64_t v = 0;
    for (size_t b = 0; b < kPayloadBytesPerCoefficient; ++b) {
      v = (v << 8) | buf[i * kPayloadBytesPerCoefficient + b];
    }
    coeffs[i] = FieldElement(v);
  }
  return Polynomial(std::move(coeffs));
}

std::optional<KeyMaterial> TryCoeffsToKey(std::span<const FieldElement> coeffs) {
  if (coeffs.empty()) return std::nullopt;
  // Cheap rejection first: a random coefficient is almost never < 2^56.
  for (const FieldElement& c : coeffs) {
    if (c.value() >= kChunkLimit) return std::nullopt;
  }
  const uint64_t c0 = coeffs[0].value();
  const size_t length = static_cast<size_t>(c0 >> 40);
  const size_t capacity = coeffs.size() * kPayloadBytesPerCoefficient;
  if (length == 0 || length > kMaxKeyBytes || length + kKeyLengthHeaderBytes > capacity) {
    return std::nullopt;
  }

  Bytes buf(capacity);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    uint64_t v = coeffs[i].value();
    for (size_t b = kPayloadBytesPerCoefficient; b-- > 0;) {
      buf[i * kPayloadBytesPerCoefficient + b] = static_cast<uint8_t>(v & 0xff);
      v >>= 8;
    }
  }
  const size_t end = kKeyLengthHeaderBytes + length;
  for (size_t i = end; i < capacity; ++i) {
    if (buf[i] != 0) return std::nullopt;
  }
  return KeyMaterial::FromBytes(Bytes(buf.begin() + kKeyLengthHeaderBytes, buf.begin() + end));
}

KeyMaterial CoeffsToKey(const Polynomial& p) {
  auto key = TryCoeffsToKey(p.coeffs());
  if (!key) throw Error(ErrorCode::kMalformedShares, "coefficients do not decode to a key");
  return *std::move(key);
}

}  // namespace baafe::ffmath
