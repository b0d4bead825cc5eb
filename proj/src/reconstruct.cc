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

#include "baafe/reconstruct.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "baafe/polynomial.h"

namespace baafe::reconstruct {
namespace {

using ffmath::FieldElement;
using thresholds::SchemeKind;

uint64_t SaturatingAdd(uint64_t a, uint64_t b) { return a > UINT64_MAX - b ? UINT64_MAX : a + b; }

// Index of the point nearest to `code` among `order` (indices into points,
// sorted by x); ties go to the smaller x.
std::optional<size_t> Nearest(const std::vector<vault::VaultPoint>& points,
                              const std::vector<size_t>& order, uint16_t code) {
  if (order.empty()) return std::nullopt;
  auto it = std::lower_bound(order.begin(), order.end(), code, [&](size_t idx, uint16_t c) {
    return points[idx].x.value() < c;
  });
  std::optional<size_t> best;
  double best_dist = 0;
  auto consider = [&](size_t idx) {
    const double d = encoder::CodeDistance(static_cast<uint16_t>(points[idx].x.value()), code);
    if (!best || d < best_dist ||
        (d == best_dist && points[idx].x.value() < points[*best].x.value())) {
      best = idx;
      best_dist = d;
    }
  };
  if (it != order.end()) consider(*it);
  if (it != order.begin()) {
    // Walk back over an equal-x run to its first element so ties are stable.
    auto prev = std::prev(it);
    const uint64_t px = points[*prev].x.value();
    while (prev != order.begin() && points[*std::prev(prev)].x.value() == px) --prev;
    consider(*prev);
  }
  return best;
}

}  // namespace

uint64_t Binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<uint64_t>(r);
}

CandidateSet MatchCandidates(const encoder::EncodedVector& probe, const vault::Vault& v,
                             const thresholds::ThresholdScheme& scheme) {
  const auto& pts = v.points;
  const bool per_feature = scheme.kind() == SchemeKind::kPerFeature;

  // Per-label (or single global) lists of point indices sorted by x.
  std::vector<std::vector<size_t>> buckets(per_feature ? probe.codes.size() : 1);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (per_feature) {
      if (pts[i].label && *pts[i].label < buckets.size()) buckets[*pts[i].label].push_back(i);
    } else {
      buckets[0].push_back(i);
    }
  }
  for (auto& b : buckets) {
    std::stable_sort(b.begin(), b.end(),
                     [&](size_t a, size_t c) { return pts[a].x.value() < pts[c].x.value(); });
  }

  CandidateSet out;
  std::set<std::pair<uint64_t, uint64_t>> taken;
  for (size_t i = 0; i < probe.codes.size(); ++i) {
    const auto& bucket = buckets[per_feature ? i : 0];
    auto idx = Nearest(pts, bucket, probe.codes[i]);
    if (!idx) continue;
    const auto& p = pts[*idx];
    if (encoder::CodeDistance(static_cast<uint16_t>(p.x.value()), probe.codes[i]) >
        scheme.TauFor(i)) {
      continue;
    }
    if (taken.emplace(p.x.value(), p.y.value()).second) out.pairs.push_back(p);
  }
  return out;
}

CombinationSampler::CombinationSampler(size_t q, size_t k, uint64_t seed)
    : q_(q), k_(k), total_(Binomial(q, k)), rng_(seed), small_(total_ < kSmallCombinationSpace) {
  if (small_) {
    binom_.assign(q_ + 1, std::vector<uint64_t>(k_ + 1, 0));
    for (size_t n = 0; n <= q_; ++n) {
      binom_[n][0] = 1;
      for (size_t r = 1; r <= std::min(n, k_); ++r) {
        binom_[n][r] = SaturatingAdd(binom_[n - 1][r - 1], r <= n - 1 ? binom_[n - 1][r] : 0);
      }
    }
  } else {
    scratch_.resize(q_);
  }
}

void CombinationSampler::Unrank(uint64_t rank, std::vector<uint32_t>& out) const {
  // Combinatorial number system: rank = sum_i C(c_i, i), c_k > ... > c_1.
  out.resize(k_);
  size_t c = q_;
  for (size_t i = k_; i >= 1; --i) {
    do {
      --c;
    } while (binom_[c][i] > rank);
    rank -= binom_[c][i];
    out[i - 1] = static_cast<uint32_t>(c);
  }
}

bool CombinationSampler::Next(std::vector<uint32_t>& out) {
  if (k_ == 0 || k_ > q_ || produced_ >= total_) return false;
  if (small_) {
    // Lazy Fisher-Yates over ranks [0, total).
    const uint64_t remaining = total_ - produced_;
    const uint64_t j = rng_.UniformBelow(remaining);
    auto at = [&](uint64_t i) {
      auto it = swapped_.find(i);
      return it == swapped_.end() ? i : it->second;
    };
    const uint64_t rank = at(j);
    swapped_[j] = at(remaining - 1);
    ++produced_;
    Unrank(rank, out);
    return true;
  }
  std::string key;
  do {
    std::iota(scratch_.begin(), scratch_.end(), 0u);
    for (size_t i = 0; i < k_; ++i) {
      const size_t j = i + rng_.UniformBelow(q_ - i);
      std::swap(scratch_[i], scratch_[j]);
    }
    out.assign(scratch_.begin(), scratch_.begin() + k_);
    std::sort(out.begin(), out.end());
    key.assign(reinterpret_cast<const char*>(out.data()), out.size() * sizeof(uint32_t));
  } while (!seen_.insert(key).second);
  ++produced_;
  return true;
}

AuthOutcome ReconstructKey(const CandidateSet& cands, const vault::SecurityParams& sec,
                           const Digest& expected_hash, size_t max_attempts, uint64_t seed) {
  AuthOutcome outcome;
  const size_t k = sec.d + 1;
  const size_t q = cands.q();
  if (q < k) {
    outcome.reason = FailureReason::kTooFewCandidates;
    return outcome;
  }
  CombinationSampler sampler(q, k, seed);
  const uint64_t budget = std::min<uint64_t>(max_attempts, sampler.total());
  // Subsets with a repeated x cannot be interpolated and are not attempts;
  // bound how many of them we are willing to skip.
  const uint64_t max_skips = sampler.total() < kSmallCombinationSpace ? sampler.total()
                                                                      : 64 * budget + 1024;

  ffmath::Interpolator interp(sec.d);
  std::vector<uint32_t> subset;
  std::vector<ffmath::Point> pts(k);
  std::vector<FieldElement> coeffs;
  uint64_t skips = 0;
  while (outcome.attempts_used < budget && sampler.Next(subset)) {
    for (size_t i = 0; i < k; ++i) pts[i] = {cands.pairs[subset[i]].x, cands.pairs[subset[i]].y};
    if (!interp.Interpolate(pts, coeffs)) {
      if (++skips > max_skips) break;
      continue;
    }
    ++outcome.attempts_used;
    auto key = ffmath::TryCoeffsToKey(coeffs);
    if (key && key->hash() == expected_hash) {
      outcome.key = std::move(key);
      return outcome;
    }
  }
  outcome.reason = FailureReason::kAttemptsExhausted;
  return outcome;
}

}  // namespace baafe::reconstruct
