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

#ifndef BAAFE_SERVICES_H_
#define BAAFE_SERVICES_H_

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "baafe/protocol.h"
#include "baafe/stores.h"
#include "baafe/transport.h"

namespace baafe::protocol {

// Serializes work per application id.
class KeyedMutex {
 public:
  std::unique_lock<std::mutex> Lock(const std::string& key);

 private:
  std::mutex mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

struct ServerOptions {
  Endpoint bind;
  std::string store;
  Endpoint fe;
  std::chrono::milliseconds fe_timeout = std::chrono::minutes(2);
};

// Authentication server: owns the registry of key hashes and relays
// enrollment and authentication to the extractor.
class AuthServer {
 public:
  // Loads the registry and binds. Throws kStoreCorrupt or kBindError.
  explicit AuthServer(ServerOptions options);

  uint16_t port() const { return listener_.port(); }
  void Serve(const std::atomic<bool>& stop);

  // One request/response exchange; exposed for tests.
  Message Handle(const Message& request);

 private:
  Message Enroll(const Message& request);
  Message Authenticate(const Message& request);

  ServerOptions options_;
  AppRegistry registry_;
  KeyedMutex app_locks_;
  Listener listener_;
};

struct FeOptions {
  Endpoint bind;
  std::string store;
  std::string data;  // behavior JSONL, re-read on every request
  std::optional<uint64_t> seed;  // fixes per-app encoder/vault seeds
  size_t max_attempts = reconstruct::kDefaultMaxAttempts;
};

// Fuzzy-extractor service. Builds vaults from the current behavior window
// and recovers keys from them; its records never leave this process.
class FeService {
 public:
  explicit FeService(FeOptions options);

  uint16_t port() const { return listener_.port(); }
  void Serve(const std::atomic<bool>& stop);

  Message Handle(const Message& request);

 private:
  Message Enroll(const Message& request);
  Message Authenticate(const Message& request);

  FeOptions options_;
  FeStore store_;
  KeyedMutex app_locks_;
  Listener listener_;
};

}  // namespace baafe::protocol

#endif  // BAAFE_SERVICES_H_
