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

#ifndef BAAFE_RECONSTRUCT_H_
#define BAAFE_RECONSTRUCT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "baafe/crypto.h"
#include "baafe/encoder.h"
#include "baafe/key_codec.h"
#include "baafe/random.h"
#include "baafe/thresholds.h"
#include "baafe/vault.h"

namespace baafe::reconstruct {

inline constexpr size_t kDefaultMaxAttempts = 20000;
// Below this many combinations the whole space is enumerated in random order.
inline constexpr uint64_t kSmallCombinationSpace = uint64_t{1} << 20;

// Vault points selected as nearest matches, one per probe feature at most,
// with repeated (x, y) collapsed.
struct CandidateSet {
  std::vector<vault::VaultPoint> pairs;

  size_t q() const { return pairs.size(); }
};

enum class FailureReason { kTooFewCandidates, kAttemptsExhausted };

struct AuthOutcome {
  std::optional<ffmath::KeyMaterial> key;  // set iff success
  FailureReason reason = FailureReason::kAttemptsExhausted;
  size_t attempts_used = 0;

  bool success() const { return key.has_value(); }
};

CandidateSet MatchCandidates(const encoder::EncodedVector& probe, const vault::Vault& v,
                             const thresholds::ThresholdScheme& scheme);

AuthOutcome ReconstructKey(const CandidateSet& cands, const vault::SecurityParams& sec,
                           const Digest& expected_hash, size_t max_attempts, uint64_t seed);

// Saturating binomial coefficient (UINT64_MAX on overflow).
uint64_t Binomial(uint64_t n, uint64_t k);

// Yields distinct k-subsets of {0..q-1}, uniformly at random and without
// repetition. Small spaces are enumerated through a lazily materialized
// random permutation of combination ranks; large ones are sampled directly
// with a record of subsets already returned.
class CombinationSampler {
 public:
  CombinationSampler(size_t q, size_t k, uint64_t seed);

  uint64_t total() const { return total_; }
  // False once every subset has been produced. `out` holds sorted indices.
  bool Next(std::vector<uint32_t>& out);

 private:
  void Unrank(uint64_t rank, std::vector<uint32_t>& out) const;

  size_t q_;
  size_t k_;
  uint64_t total_;
  uint64_t produced_ = 0;
  Rng rng_;
  bool small_;
  std::unordered_map<uint64_t, uint64_t> swapped_;
  std::vector<std::vector<uint64_t>> binom_;
  std::unordered_set<std::string> seen_;
  std::vector<uint32_t> scratch_;
};

}  // namespace baafe::reconstruct

#endif  // BAAFE_RECONSTRUCT_H_
