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

#ifndef BAAFE_CRYPTO_H_
#define BAAFE_CRYPTO_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace baafe {

using Bytes = std::vector<uint8_t>;
using Digest = std::array<uint8_t, 32>;

Digest Sha256(std::span<const uint8_t> data);

// Lowercase hex.
std::string ToHex(std::span<const uint8_t> data);
// Accepts either case; nullopt on odd length or non-hex characters.
std::optional<Bytes> FromHex(std::string_view hex);
std::optional<Digest> DigestFromHex(std::string_view hex);

// Cryptographically strong random octets (OpenSSL RAND_bytes).
Bytes RandomBytes(size_t count);

// Overwrites the buffer in a way the optimizer cannot elide.
void SecureWipe(std::span<uint8_t> data);
void SecureWipe(std::string& text);

}  // namespace baafe

#endif  // BAAFE_CRYPTO_H_
