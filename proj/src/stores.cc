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

#include "baafe/stores.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "baafe/error.h"
#include "nlohmann/json.hpp"

namespace baafe::protocol {
namespace {

using nlohmann::json;

// Parsed top-level object of a store file, or nullopt when it is absent.
std::optional<json> ReadStore(const std::string& path, const char* kind) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kStoreCorrupt, std::string(kind) + " unreadable: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreCorrupt, std::string(kind) + " " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") ||
      j["format_version"] != kStoreFormatVersion) {
    throw Error(ErrorCode::kStoreCorrupt,
                std::string(kind) + " " + path + ": missing or unsupported format_version");
  }
  return j;
}

}  // namespace

void AtomicWriteFile(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace " + path + ": " + ec.message());
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

AppRegistry::AppRegistry(std::string path) : path_(std::move(path)) {
  auto j = ReadStore(path_, "registry");
  if (!j) return;
  try {
    for (const auto& [app, e] : j->at("apps").items()) {
      auto digest = DigestFromHex(e.at("key_hash").get<std::string>());
      if (!digest) throw Error(ErrorCode::kStoreCorrupt, "bad key_hash for " + app);
      entries_[app] = {*digest, e.at("enrolled_at").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreCorrupt, "registry " + path_ + ": " + e.what());
  }
}

std::optional<RegistryEntry> AppRegistry::Find(const std::string& app_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(app_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AppRegistry::Put(const std::string& app_id, const RegistryEntry& entry) {
  std::lock_guard<std::mutex> lock(mu_);
  auto previous = entries_.find(app_id) != entries_.end()
                      ? std::optional<RegistryEntry>(entries_[app_id])
                      : std::nullopt;
  entries_[app_id] = entry;
  try {
    Persist();
  } catch (...) {
    if (previous) {
      entries_[app_id] = *previous;
    } else {
      entries_.erase(app_id);
    }
    throw;
  }
}

size_t AppRegistry::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

void AppRegistry::Persist() const {
  json apps = json::object();
  for (const auto& [app, e] : entries_) {
    apps[app] = {{"key_hash", ToHex(e.key_hash)}, {"enrolled_at", e.enrolled_at}};
  }
  json j = {{"format_version", kStoreFormatVersion}, {"apps", apps}};
  AtomicWriteFile(path_, j.dump(2) + "\n");
}

FeStore::FeStore(std::string path) : path_(std::move(path)) {
  auto j = ReadStore(path_, "extractor store");
  if (!j) return;
  try {
    for (const auto& [app, r] : j->at("records").items()) {
      auto rec = extractor::FeRecordFromJson(r);
      if (rec.app_id != app) throw Error(ErrorCode::kStoreCorrupt, "record key mismatch: " + app);
      records_[app] = std::move(rec);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kStoreCorrupt, "extractor store " + path_ + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kStoreCorrupt) throw;
    throw Error(ErrorCode::kStoreCorrupt, "extractor store " + path_ + ": " + e.what());
  }
}

std::optional<extractor::FeRecord> FeStore::Find(const std::string& app_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = records_.find(app_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void FeStore::Put(const extractor::FeRecord& record) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = records_.find(record.app_id);
  std::optional<extractor::FeRecord> previous;
  if (it != records_.end()) previous = it->second;
  records_.insert_or_assign(record.app_id, record);
  try {
    Persist();
  } catch (...) {
    if (previous) {
      records_.insert_or_assign(record.app_id, *previous);
    } else {
      records_.erase(record.app_id);
    }
    throw;
  }
}

extractor::FeRecordMap FeStore::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_;
}

void FeStore::Persist() const {
  json recs = json::object();
  for (const auto& [app, r] : records_) recs[app] = extractor::ToJson(r);
  json j = {{"format_version", kStoreFormatVersion}, {"records", recs}};
  AtomicWriteFile(path_, j.dump() + "\n");
}

}  // namespace baafe::protocol
