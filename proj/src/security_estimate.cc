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

#include "baafe/security_estimate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "baafe/error.h"
#include "baafe/key_codec.h"
#include "baafe/polynomial.h"
#include "baafe/random.h"
#include "baafe/reconstruct.h"

namespace baafe::eval {
namespace {

using ffmath::FieldElement;
using ffmath::Point;

constexpr uint64_t kMonteCarloLimit = 1'000'000;
constexpr uint64_t kExhaustiveLimit = 9;

// True iff the subset interpolates to the enrolled key.
class SubsetChecker {
 public:
  SubsetChecker(const AttackVault& av) : av_(av), interp_(av.vault.sec.d) {}

  bool Check(std::span<const uint32_t> subset) {
    pts_.clear();
    for (uint32_t i : subset) pts_.push_back({av_.vault.points[i].x, av_.vault.points[i].y});
    if (!interp_.Interpolate(pts_, coeffs_)) return false;
    auto key = ffmath::TryCoeffsToKey(coeffs_);
    return key && key->hash() == av_.key_hash;
  }

 private:
  const AttackVault& av_;
  ffmath::Interpolator interp_;
  std::vector<Point> pts_;
  std::vector<FieldElement> coeffs_;
};

}  // namespace

BigInt BinomialBig(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt ElementarySymmetric(std::span<const BigInt> values, size_t k) {
  // e[j] after processing a prefix; classic O(len * k) recurrence.
  std::vector<BigInt> e(k + 1, 0);
  e[0] = 1;
  for (const BigInt& v : values) {
    for (size_t j = k; j >= 1; --j) e[j] += e[j - 1] * v;
  }
  return e[k];
}

BruteForceEstimate EstimateBruteForce(const vault::SecurityParams& sec,
                                      thresholds::SchemeKind scheme,
                                      std::span<const FeatureCounts> per_feature,
                                      uint64_t n_distinct) {
  if (sec.d < 1 || sec.n < 1) throw Error(ErrorCode::kInvalidParams, "need n >= 1 and d >= 1");
  const uint64_t k = sec.d + 1;
  BruteForceEstimate est;
  if (scheme == thresholds::SchemeKind::kPerFeature) {
    std::vector<FeatureCounts> counts(per_feature.begin(), per_feature.end());
    if (counts.empty()) counts.assign(sec.n, FeatureCounts{1, sec.c});
    std::vector<BigInt> all;
    std::vector<BigInt> genuine;
    for (const auto& fc : counts) {
      all.emplace_back(fc.genuine + fc.chaff);
      genuine.emplace_back(fc.genuine);
    }
    est.total_subsets = ElementarySymmetric(all, k);
    est.valid_subsets = ElementarySymmetric(genuine, k);
  } else {
    if (n_distinct == 0) n_distinct = sec.n;
    est.total_subsets = BinomialBig(sec.n + sec.c, k);
    est.valid_subsets = BinomialBig(std::min<uint64_t>(n_distinct, sec.n), k);
  }
  est.paper_expected_attempts = BigRational(est.total_subsets, 2);
  if (est.valid_subsets > 0) {
    est.corrected_expected_attempts =
        BigRational(est.total_subsets + 1, est.valid_subsets + 1);
  }
  return est;
}

std::string FormatScientific(const BigRational& value, int digits) {
  if (value == 0) return "0";
  if (digits < 1) digits = 1;
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  const bool negative = num < 0;
  if (negative) num = -num;
  // Find e with 10^e <= value < 10^(e+1) using integer arithmetic.
  long exponent = static_cast<long>(num.str().size()) - static_cast<long>(den.str().size());
  auto pow10 = [](long e) {
    BigInt p = 1;
    for (long i = 0; i < e; ++i) p *= 10;
    return p;
  };
  auto at_least = [&](long e) {  // value >= 10^e
    return e >= 0 ? num >= den * pow10(e) : num * pow10(-e) >= den;
  };
  while (!at_least(exponent)) --exponent;
  while (at_least(exponent + 1)) ++exponent;
  // mantissa digits = round(value * 10^(digits - 1 - exponent)).
  const long shift = digits - 1 - exponent;
  BigInt scaled_num = shift >= 0 ? num * pow10(shift) : num;
  BigInt scaled_den = shift >= 0 ? den : den * pow10(-shift);
  BigInt mant = (2 * scaled_num + scaled_den) / (2 * scaled_den);
  if (mant.str().size() > static_cast<size_t>(digits)) {
    mant /= 10;
    ++exponent;
  }
  std::string m = mant.str();
  std::string out = negative ? "-" : "";
  out += m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  char exp[16];
  std::snprintf(exp, sizeof(exp), "e%+03ld", exponent);
  return out + exp;
}

std::string FormatExact(const BigRational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  // Terminating iff den = 2^a 5^b; scale to den = 10^k.
  BigInt rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1) return num.str() + "/" + den.str();
  const unsigned k = std::max(twos, fives);
  BigInt scale = 1;
  for (unsigned i = 0; i < k; ++i) scale *= 10;
  const bool negative = num < 0;
  if (negative) num = -num;
  std::string digits = BigInt(num * (scale / den)).str();
  if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
  digits.insert(digits.size() - k, ".");
  return (negative ? "-" : "") + digits;
}

double ToDouble(const BigRational& value) {
  return std::stod(FormatScientific(value, 17));
}

double YearsForAttempts(const BigRational& attempts, double seconds_per_attempt) {
  constexpr double kSecondsPerYear = 365.25 * 86400.0;
  return ToDouble(attempts) * seconds_per_attempt / kSecondsPerYear;
}

AttackVault BuildAttackVault(size_t n, size_t c, size_t d, uint64_t seed) {
  vault::SecurityParams sec{n, c, d};
  if (n < d + 1 || d < 1) throw Error(ErrorCode::kInvalidParams, "need n >= d + 1 and d >= 1");
  Rng rng(seed);
  std::set<uint16_t> codes;
  while (codes.size() < n) codes.insert(static_cast<uint16_t>(rng.UniformBelow(vault::kCodeSpace)));
  encoder::EncodedVector encoded;
  encoded.codes.assign(codes.begin(), codes.end());
  rng.Shuffle(encoded.codes.begin(), encoded.codes.end());

  const size_t key_len = std::min<size_t>(16, (d + 1) * ffmath::kPayloadBytesPerCoefficient -
                                                  ffmath::kKeyLengthHeaderBytes);
  Bytes key_bytes(key_len);
  for (auto& b : key_bytes) b = static_cast<uint8_t>(rng.UniformBelow(256));
  auto key = ffmath::KeyMaterial::FromBytes(std::move(key_bytes));
  // A sub-unit radius only excludes the genuine codes themselves.
  const auto scheme = thresholds::GlobalThreshold(0.5);
  if (c == 0) {
    // Enroll insists on chaff; build the genuine-only vault directly.
    const auto poly = ffmath::KeyToCoeffs(key, d);
    vault::Vault v{"attack", vault::GenuinePoints(encoded, scheme, poly), sec,
                   thresholds::SchemeKind::kGlobal};
    return {std::move(v), key.hash()};
  }
  return {vault::Enroll("attack", encoded, key, sec, scheme, rng.NextU64()), key.hash()};
}

MonteCarloResult MonteCarloAttack(const AttackVault& av, size_t trials, uint64_t seed) {
  const size_t total = av.vault.points.size();
  const size_t k = av.vault.sec.d + 1;
  if (reconstruct::Binomial(total, k) >= kMonteCarloLimit) {
    throw Error(ErrorCode::kInvalidParams, "subset space too large for simulation");
  }
  SubsetChecker checker(av);
  MonteCarloResult r;
  r.trials = trials;
  double sum = 0;
  std::vector<uint32_t> subset;
  for (size_t t = 0; t < trials; ++t) {
    reconstruct::CombinationSampler sampler(total, k, DeriveSeed(seed, t));
    size_t attempts = 0;
    bool found = false;
    while (sampler.Next(subset)) {
      ++attempts;
      if (checker.Check(subset)) {
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::kInvalidParams, "vault has no valid subset");
    sum += static_cast<double>(attempts);
    r.min_attempts = t == 0 ? attempts : std::min(r.min_attempts, attempts);
    r.max_attempts = std::max(r.max_attempts, attempts);
  }
  r.mean_attempts = trials ? sum / static_cast<double>(trials) : 0;
  return r;
}

BigRational ExhaustiveAttackMean(const AttackVault& av) {
  const size_t total = av.vault.points.size();
  const size_t k = av.vault.sec.d + 1;
  const uint64_t space = reconstruct::Binomial(total, k);
  if (space > kExhaustiveLimit || space == 0) {
    throw Error(ErrorCode::kInvalidParams, "subset space unsuitable for exhaustive ordering");
  }
  // Validity of every subset, enumerated lexicographically.
  SubsetChecker checker(av);
  std::vector<bool> valid;
  std::vector<uint32_t> subset(k);
  std::iota(subset.begin(), subset.end(), 0u);
  while (true) {
    valid.push_back(checker.Check(subset));
    size_t i = k;
    while (i > 0 && subset[i - 1] == total - k + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
  if (std::none_of(valid.begin(), valid.end(), [](bool b) { return b; })) {
    throw Error(ErrorCode::kInvalidParams, "vault has no valid subset");
  }
  std::vector<size_t> order(valid.size());
  std::iota(order.begin(), order.end(), size_t{0});
  BigInt sum = 0;
  BigInt orderings = 0;
  do {
    size_t pos = 0;
    while (!valid[order[pos]]) ++pos;
    sum += pos + 1;
    orderings += 1;
  } while (std::next_permutation(order.begin(), order.end()));
  return BigRational(sum, orderings);
}

}  // namespace baafe::eval
