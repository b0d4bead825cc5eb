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

#ifndef BAAFE_TIMING_H_
#define BAAFE_TIMING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "baafe/reconstruct.h"

namespace baafe::eval {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

// Ordinary least squares. r2 is 1 when every y is equal and fits exactly.
LinearFit FitLine(std::span<const double> xs, std::span<const double> ys);

bool NonDecreasing(std::span<const double> ys);

struct TimingConfig {
  size_t n = 56;
  size_t c = 200;
  size_t d = 32;
  std::vector<size_t> chaff_counts{100, 200, 400, 800, 1600};
  std::vector<size_t> degrees{8, 24, 32, 40, 48};
  size_t repetitions = 5;
  size_t enroll_repetitions = 31;  // median per chaff count
  size_t max_attempts = reconstruct::kDefaultMaxAttempts;
  size_t key_bytes = 32;
  uint64_t seed = 1;
};

struct TimingSample {
  size_t param = 0;  // c or d, depending on the series
  double mean_ms = 0;
};

struct TimingReport {
  std::vector<TimingSample> enroll_by_chaff;  // median ms
  LinearFit enroll_fit;
  std::vector<TimingSample> failed_auth_by_degree;
  std::vector<TimingSample> success_auth_by_degree;
  double success_auth_default_ms = 0;
  double failed_auth_default_ms = 0;
  // Interpolate + decode + hash for one combination at the default degree.
  double seconds_per_attempt = 0;
};

// Enrollment covers encoder generation, encoding and vault construction;
// successful authentication covers encoding, matching and reconstruction on
// the enrollment input; failed authentication runs the full attempt budget
// over a candidate set made only of chaff.
TimingReport MeasureTiming(const TimingConfig& config);

}  // namespace baafe::eval

#endif  // BAAFE_TIMING_H_
