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

#ifndef BAAFE_STORES_H_
#define BAAFE_STORES_H_

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "baafe/crypto.h"
#include "baafe/extractor.h"

namespace baafe::protocol {

inline constexpr int kStoreFormatVersion = 1;

// Writes to a sibling temporary file and renames it over `path`.
void AtomicWriteFile(const std::string& path, const std::string& content);

struct RegistryEntry {
  Digest key_hash{};
  std::string enrolled_at;  // ISO 8601, UTC
};

// Server-side app registry. Holds key hashes only. Every mutation is
// persisted before it returns.
class AppRegistry {
 public:
  // A missing file starts an empty registry; an unreadable one throws
  // kStoreCorrupt.
  explicit AppRegistry(std::string path);

  std::optional<RegistryEntry> Find(const std::string& app_id) const;
  void Put(const std::string& app_id, const RegistryEntry& entry);
  size_t size() const;

 private:
  void Persist() const;

  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, RegistryEntry> entries_;
};

// Extractor-private records, persisted like AppRegistry.
class FeStore {
 public:
  explicit FeStore(std::string path);

  std::optional<extractor::FeRecord> Find(const std::string& app_id) const;
  void Put(const extractor::FeRecord& record);
  extractor::FeRecordMap Snapshot() const;

 private:
  void Persist() const;

  std::string path_;
  mutable std::mutex mu_;
  extractor::FeRecordMap records_;
};

std::string UtcTimestamp();

}  // namespace baafe::protocol

#endif  // BAAFE_STORES_H_
