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

#ifndef BAAFE_SECURITY_ESTIMATE_H_
#define BAAFE_SECURITY_ESTIMATE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "baafe/crypto.h"
#include "baafe/thresholds.h"
#include "baafe/vault.h"

namespace baafe::eval {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Points available to an attacker at one feature under PerFeature.
struct FeatureCounts {
  uint64_t genuine = 1;
  uint64_t chaff = 0;
};

struct BruteForceEstimate {
  BigInt total_subsets;  // N: (d+1)-combinations the attacker can draw
  BigInt valid_subsets;  // K: combinations made only of genuine points
  // Half the search space, as the textbook bound states it.
  BigRational paper_expected_attempts;
  // (N + 1) / (K + 1): expected draws without replacement until the first
  // valid combination. Unset when no valid combination exists.
  std::optional<BigRational> corrected_expected_attempts;

  bool reachable() const { return corrected_expected_attempts.has_value(); }
};

BigInt BinomialBig(uint64_t n, uint64_t k);

// e_k(values): sum over k-subsets of the product of their members.
BigInt ElementarySymmetric(std::span<const BigInt> values, size_t k);

// For Global/PerApp the attacker picks among n + c points and n_distinct of
// them are genuine (pass 0 to use n). For PerFeature one point is drawn from
// each of d + 1 distinct features; `per_feature` defaults to n features with
// one genuine and c chaff points each.
BruteForceEstimate EstimateBruteForce(const vault::SecurityParams& sec,
                                      thresholds::SchemeKind scheme,
                                      std::span<const FeatureCounts> per_feature = {},
                                      uint64_t n_distinct = 0);

// Decimal rendering with `digits` significant digits, e.g. "1.51e+73".
std::string FormatScientific(const BigRational& value, int digits = 3);
// Exact rendering: an integer, a terminating decimal, or "num/den".
std::string FormatExact(const BigRational& value);
double ToDouble(const BigRational& value);

// Years needed for `attempts` guesses at `seconds_per_attempt`.
double YearsForAttempts(const BigRational& attempts, double seconds_per_attempt);

// A small vault with its key hash, for simulating the brute-force attacker.
struct AttackVault {
  vault::Vault vault;
  Digest key_hash{};
};

// n genuine points on random distinct codes plus c chaff points, degree d.
AttackVault BuildAttackVault(size_t n, size_t c, size_t d, uint64_t seed);

struct MonteCarloResult {
  size_t trials = 0;
  double mean_attempts = 0;
  size_t min_attempts = 0;
  size_t max_attempts = 0;
};

// Each trial draws distinct (d+1)-subsets of all vault points uniformly at
// random, interpolating and hash-checking each, until the key is found.
// Requires C(n+c, d+1) < 10^6.
MonteCarloResult MonteCarloAttack(const AttackVault& av, size_t trials, uint64_t seed);

// Exact mean position of the first valid subset over every ordering of the
// subset space. Requires C(n+c, d+1) <= 9.
BigRational ExhaustiveAttackMean(const AttackVault& av);

}  // namespace baafe::eval

#endif  // BAAFE_SECURITY_ESTIMATE_H_
