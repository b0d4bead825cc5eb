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

#include "baafe/timing.h"

#include <algorithm>
#include <chrono>

#include "baafe/error.h"
#include "baafe/extractor.h"
#include "baafe/random.h"

namespace baafe::eval {
namespace {

using Clock = std::chrono::steady_clock;

double Ms(Clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); }

struct Fixture {
  behavior::FeatureVector features;
  encoder::NormalizationParams identity;
};

Fixture MakeFixture(size_t n, uint64_t seed) {
  Fixture f;
  Rng rng(seed);
  for (size_t i = 0; i < n; ++i) f.features.values.push_back(rng.Uniform01());
  f.identity.scheme = encoder::NormalizationScheme::kMinMax;
  f.identity.min.assign(n, 0.0);
  f.identity.max.assign(n, 1.0);
  return f;
}

ffmath::KeyMaterial MakeKey(size_t bytes, uint64_t seed) {
  Rng rng(seed);
  Bytes b(bytes);
  for (auto& x : b) x = static_cast<uint8_t>(rng.UniformBelow(256));
  return ffmath::KeyMaterial::FromBytes(std::move(b));
}

extractor::EnrollmentResult EnrollOnce(const Fixture& f, size_t n, size_t c, size_t d,
                                       const ffmath::KeyMaterial& key, uint64_t seed) {
  extractor::EnrollmentConfig cfg;
  cfg.sec = {n, c, d};
  return extractor::EnrollBehavior("timing", f.features, f.identity, {}, key, cfg, seed);
}

// First n points of a chaff-only vault; no combination can succeed.
reconstruct::CandidateSet ChaffCandidates(const std::vector<vault::VaultPoint>& chaff, size_t n) {
  reconstruct::CandidateSet cs;
  for (size_t i = 0; i < chaff.size() && i < n; ++i) cs.pairs.push_back(chaff[i]);
  return cs;
}

}  // namespace

LinearFit FitLine(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::kInvalidParams, "need at least two paired samples");
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

bool NonDecreasing(std::span<const double> ys) {
  for (size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] < ys[i - 1]) return false;
  }
  return true;
}

TimingReport MeasureTiming(const TimingConfig& config) {
  if (config.repetitions == 0 || config.enroll_repetitions == 0) {
    throw Error(ErrorCode::kInvalidParams, "repetitions must be >= 1");
  }
  const Fixture f = MakeFixture(config.n, DeriveSeed(config.seed, "features"));
  const auto key = MakeKey(config.key_bytes, DeriveSeed(config.seed, "key"));
  TimingReport report;

  // Enrollment takes about a millisecond, so a preempted run would swamp the
  // chaff-dependent part of a mean; take the median per chaff count. Rounds
  // visit every chaff count so that machine drift does not track c.
  const auto& counts = config.chaff_counts;
  for (size_t c : counts) EnrollOnce(f, config.n, c, config.d, key, config.seed);  // warm-up
  std::vector<std::vector<double>> runs(counts.size());
  for (size_t r = 0; r < config.enroll_repetitions; ++r) {
    for (size_t i = 0; i < counts.size(); ++i) {
      const auto start = Clock::now();
      EnrollOnce(f, config.n, counts[i], config.d, key, DeriveSeed(config.seed, r));
      runs[i].push_back(Ms(Clock::now() - start));
    }
  }
  std::vector<double> xs, ys;
  for (size_t i = 0; i < counts.size(); ++i) {
    auto& v = runs[i];
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    report.enroll_by_chaff.push_back({counts[i], v[v.size() / 2]});
    xs.push_back(static_cast<double>(counts[i]));
    ys.push_back(v[v.size() / 2]);
  }
  if (xs.size() >= 2) report.enroll_fit = FitLine(xs, ys);

  auto measure_degree = [&](size_t d, double& success_ms, double& fail_ms) {
    const auto enrolled = EnrollOnce(f, config.n, config.c, d, key, config.seed);
    // Genuine x values are the enrollment codes; everything else is chaff.
    std::vector<vault::VaultPoint> chaff;
    for (const auto& p : enrolled.vault.points) {
      bool genuine = false;
      for (uint16_t code : enrolled.encoded.codes) genuine |= p.x.value() == code;
      if (!genuine) chaff.push_back(p);
    }
    const auto impostor = ChaffCandidates(chaff, config.n);

    double s = 0, fl = 0;
    for (size_t r = 0; r < config.repetitions; ++r) {
      extractor::AuthOptions opts{config.max_attempts, DeriveSeed(config.seed, r)};
      auto start = Clock::now();
      const auto ok = extractor::AuthenticateFeatures(f.features, enrolled.vault,
                                                      enrolled.record, opts);
      s += Ms(Clock::now() - start);
      if (!ok.outcome.success()) {
        throw Error(ErrorCode::kInvalidParams, "timing fixture failed to authenticate");
      }
      start = Clock::now();
      const auto bad = reconstruct::ReconstructKey(impostor, enrolled.vault.sec,
                                                   enrolled.record.key_hash, config.max_attempts,
                                                   DeriveSeed(config.seed, r));
      fl += Ms(Clock::now() - start);
      if (bad.success()) throw Error(ErrorCode::kInvalidParams, "chaff reconstructed the key");
    }
    success_ms = s / static_cast<double>(config.repetitions);
    fail_ms = fl / static_cast<double>(config.repetitions);
  };

  for (size_t d : config.degrees) {
    double s = 0, fl = 0;
    measure_degree(d, s, fl);
    report.success_auth_by_degree.push_back({d, s});
    report.failed_auth_by_degree.push_back({d, fl});
  }
  measure_degree(config.d, report.success_auth_default_ms, report.failed_auth_default_ms);
  report.seconds_per_attempt =
      report.failed_auth_default_ms / 1000.0 / static_cast<double>(config.max_attempts);
  return report;
}

}  // namespace baafe::eval
