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

#include "baafe/behavior.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "baafe/error.h"
#include "nlohmann/json.hpp"

namespace baafe::behavior {
namespace {

using nlohmann::json;

struct Row {
  Date date;
  double value;
  size_t line;
};

[[noreturn]] void ParseFail(size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::optional<size_t> AttributeIndex(std::string_view name) {
  for (size_t i = 0; i < kNumAttributes; ++i) {
    if (kAttributeNames[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<Date> ParseDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](size_t pos, size_t len, auto& out) {
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc() && p == text.data() + pos + len;
  };
  if (!parse(0, 4, y) || !parse(5, 2, m) || !parse(8, 2, d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date(ymd);
}

std::string FormatDate(Date d) {
  std::chrono::year_month_day ymd(d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

BehaviorDataset Ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return IngestStream(in);
}

BehaviorDataset IngestStream(std::istream& in) {
  std::map<std::string, std::array<std::vector<Row>, kNumAttributes>> rows;
  std::string text;
  size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      ParseFail(line, e.what());
    }
    if (!obj.is_object()) ParseFail(line, "expected a JSON object");
    for (const char* field : {"app_id", "attribute", "date"}) {
      if (!obj.contains(field) || !obj[field].is_string()) {
        ParseFail(line, std::string("missing or non-string field '") + field + "'");
      }
    }
    if (!obj.contains("value") || !obj["value"].is_number()) {
      ParseFail(line, "missing or non-numeric field 'value'");
    }
    const std::string app = obj["app_id"];
    if (app.empty()) ParseFail(line, "empty app_id");
    auto attr = AttributeIndex(obj["attribute"].get<std::string>());
    if (!attr) ParseFail(line, "unknown attribute '" + obj["attribute"].get<std::string>() + "'");
    auto date = ParseDate(obj["date"].get<std::string>());
    if (!date) ParseFail(line, "bad date '" + obj["date"].get<std::string>() + "'");
    const double value = obj["value"].get<double>();
    if (!std::isfinite(value) || value < 0) ParseFail(line, "value must be finite and >= 0");
    rows[app][*attr].push_back({*date, value, line});
  }

  BehaviorDataset out;
  for (auto& [app, per_attr] : rows) {
    AppSeries series;
    for (size_t a = 0; a < kNumAttributes; ++a) {
      auto& r = per_attr[a];
      if (r.empty()) {
        throw Error(ErrorCode::kMissingAttribute,
                    "app '" + app + "' has no rows for '" + std::string(kAttributeNames[a]) + "'");
      }
      std::stable_sort(r.begin(), r.end(),
                       [](const Row& x, const Row& y) { return x.date < y.date; });
      AttributeSeries s{std::string(kAttributeNames[a]), r.front().date, {}};
      s.values.reserve(r.size());
      for (size_t i = 0; i < r.size(); ++i) {
        if (i > 0 && r[i].date == r[i - 1].date) {
          ParseFail(std::max(r[i].line, r[i - 1].line),
                    "duplicate date " + FormatDate(r[i].date) + " for " + app + "/" + s.attribute);
        }
        if (i > 0 && r[i].date != r[i - 1].date + std::chrono::days(1)) {
          throw Error(ErrorCode::kGapError, app + "/" + s.attribute + ": no data between " +
                                                FormatDate(r[i - 1].date) + " and " +
                                                FormatDate(r[i].date));
        }
        s.values.push_back(r[i].value);
      }
      series.push_back(std::move(s));
    }
    for (const auto& s : series) {
      if (s.start != series.front().start || s.values.size() != series.front().values.size()) {
        throw Error(ErrorCode::kGapError,
                    "app '" + app + "': attribute '" + s.attribute +
                        "' does not cover the same days as '" + series.front().attribute + "'");
      }
    }
    out.emplace(app, std::move(series));
  }
  return out;
}

void WriteJsonl(const BehaviorDataset& dataset, std::ostream& out) {
  for (const auto& [app, series] : dataset) {
    for (const auto& s : series) {
      for (size_t i = 0; i < s.values.size(); ++i) {
        json row;
        row["app_id"] = app;
        row["attribute"] = s.attribute;
        row["date"] = FormatDate(s.DateAt(i));
        row["value"] = s.values[i];
        out << row.dump() << '\n';
      }
    }
  }
}

double Percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

FeatureVector WindowFeatures(const BehaviorWindow& w) {
  FeatureVector fv;
  fv.values.reserve(kNumFeatures);
  for (size_t a = 0; a < kNumAttributes; ++a) {
    // Windows may carry series in any order; features follow canonical order.
    auto it = std::find_if(w.series.begin(), w.series.end(), [&](const AttributeSeries& s) {
      return s.attribute == kAttributeNames[a];
    });
    if (it == w.series.end() || it->values.size() != w.length_days || w.length_days == 0) {
      throw Error(ErrorCode::kInsufficientData,
                  "window for '" + w.app_id + "' lacks a complete '" +
                      std::string(kAttributeNames[a]) + "' series");
    }
    const auto& v = it->values;
    double sum = 0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(v.size());
    double sq = 0;
    for (double x : v) sq += (x - mean) * (x - mean);
    const double sd = std::sqrt(sq / static_cast<double>(v.size()));
    fv.values.push_back(mean);
    fv.values.push_back(sd);
    fv.values.push_back(Percentile(v, 0.50));
    fv.values.push_back(Percentile(v, 0.75));
  }
  return fv;
}

std::vector<BehaviorWindow> SlideWindows(const std::string& app_id, const AppSeries& series,
                                         size_t window_days, size_t step_days) {
  if (series.empty() || window_days == 0 || step_days == 0) {
    throw Error(ErrorCode::kInsufficientData, "no series or zero window/step");
  }
  const size_t days = series.front().values.size();
  for (const auto& s : series) {
    if (s.values.size() != days || s.start != series.front().start) {
      throw Error(ErrorCode::kGapError, "series for '" + app_id + "' are not aligned");
    }
  }
  if (days < window_days) {
    throw Error(ErrorCode::kInsufficientData, "'" + app_id + "' has " + std::to_string(days) +
                                                  " days, window needs " +
                                                  std::to_string(window_days));
  }
  std::vector<BehaviorWindow> out;
  for (size_t off = 0; off + window_days <= days; off += step_days) {
    BehaviorWindow w{app_id, series.front().DateAt(off), window_days, {}};
    w.series.reserve(series.size());
    for (const auto& s : series) {
      w.series.push_back({s.attribute, s.DateAt(off),
                          std::vector<double>(s.values.begin() + off,
                                              s.values.begin() + off + window_days)});
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace baafe::behavior
