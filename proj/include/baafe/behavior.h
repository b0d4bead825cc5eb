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

#ifndef BAAFE_BEHAVIOR_H_
#define BAAFE_BEHAVIOR_H_

#include <array>
#include <chrono>
#include <iosfwd>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace baafe::behavior {

inline constexpr size_t kNumAttributes = 14;
inline constexpr size_t kStatsPerAttribute = 4;  // mean, std, p50, p75
inline constexpr size_t kNumFeatures = kNumAttributes * kStatsPerAttribute;
inline constexpr size_t kDefaultWindowDays = 15;

// Canonical attribute ids, in feature-vector order.
inline constexpr std::array<std::string_view, kNumAttributes> kAttributeNames = {
    "unique_urls",      "unique_url_categories", "bytes_received",     "bytes_sent",
    "http_requests",    "ssl_requests",          "proxy_auth_failures", "http_200_responses",
    "fw_allowed",       "fw_denied",             "outgoing_connections", "unique_destinations",
    "unique_source_ports", "siem_requests",
};

std::optional<size_t> AttributeIndex(std::string_view name);

using Date = std::chrono::sys_days;

// "YYYY-MM-DD"; nullopt if malformed or not a calendar date.
std::optional<Date> ParseDate(std::string_view text);
std::string FormatDate(Date d);

// One value per consecutive day starting at `start`.
struct AttributeSeries {
  std::string attribute;
  Date start;
  std::vector<double> values;

  Date DateAt(size_t i) const { return start + std::chrono::days(static_cast<int>(i)); }
};

// All 14 series of one application, in canonical attribute order and aligned
// on the same start date and length.
using AppSeries = std::vector<AttributeSeries>;
using BehaviorDataset = std::map<std::string, AppSeries>;

struct BehaviorWindow {
  std::string app_id;
  Date start_date;
  size_t length_days = kDefaultWindowDays;
  std::vector<AttributeSeries> series;
};

// Attribute-major: [mean, std, p50, p75] for each attribute.
struct FeatureVector {
  std::vector<double> values;
};

// Reads the behavior JSONL format. Throws kParseError (with line number),
// kMissingAttribute or kGapError.
BehaviorDataset Ingest(const std::string& path);
BehaviorDataset IngestStream(std::istream& in);

void WriteJsonl(const BehaviorDataset& dataset, std::ostream& out);

FeatureVector WindowFeatures(const BehaviorWindow& w);

// Every window of `window_days` consecutive days, advancing by `step_days`.
// Throws kInsufficientData when fewer than window_days days are available.
std::vector<BehaviorWindow> SlideWindows(const std::string& app_id, const AppSeries& series,
                                         size_t window_days = kDefaultWindowDays,
                                         size_t step_days = 1);

// Sorted-sample percentile with linear interpolation between closest ranks
// (rank h = (N - 1) * q).
double Percentile(std::vector<double> values, double q);

}  // namespace baafe::behavior

#endif  // BAAFE_BEHAVIOR_H_
