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

#ifndef BAAFE_TRANSPORT_H_
#define BAAFE_TRANSPORT_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "nlohmann/json.hpp"

namespace baafe::protocol {

// Frames larger than this are rejected as a protocol violation.
inline constexpr uint32_t kMaxFrameBytes = 64u << 20;

struct Endpoint {
  std::string host;
  uint16_t port = 0;

  std::string ToString() const { return host + ":" + std::to_string(port); }
};

// "HOST:PORT"; throws kInvalidConfig.
Endpoint ParseEndpoint(const std::string& text);

// Owns a connected TCP socket. Frames are a 4-octet big-endian length
// followed by that many octets of UTF-8 JSON.
class Connection {
 public:
  Connection() = default;
  explicit Connection(int fd) : fd_(fd) {}
  ~Connection();
  Connection(Connection&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Connection& operator=(Connection&& other) noexcept;
  Connection(const Connection&) = delete;
  Connection& operator=(const Connection&) = delete;

  bool valid() const { return fd_ >= 0; }

  // Throws kTransport.
  void SendFrame(const std::string& payload);
  // nullopt on orderly shutdown before a frame starts; throws kTransport on
  // truncation, oversize frames or socket errors.
  std::optional<std::string> ReceiveFrame();

  void Send(const nlohmann::json& message);
  // Throws kTransport for frames that are not a JSON object.
  std::optional<nlohmann::json> Receive();

  void SetTimeout(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
};

// Throws kTransport when the peer cannot be reached.
Connection Dial(const Endpoint& ep, std::chrono::milliseconds timeout = std::chrono::seconds(30));

class Listener {
 public:
  // Port 0 picks an ephemeral port. Throws kBindError.
  explicit Listener(const Endpoint& ep);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  uint16_t port() const { return port_; }

  // Waits up to `poll` for a connection; nullopt on timeout.
  std::optional<Connection> Accept(std::chrono::milliseconds poll);

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// Accepts until `stop` is set, running `handler` on its own thread per
// connection, then waits for every handler to return.
void ServeConnections(Listener& listener, const std::atomic<bool>& stop,
                      const std::function<void(Connection&)>& handler);

}  // namespace baafe::protocol

#endif  // BAAFE_TRANSPORT_H_
