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

#ifndef BAAFE_PROTOCOL_H_
#define BAAFE_PROTOCOL_H_

#include <optional>
#include <string>

#include "baafe/error.h"
#include "baafe/extractor.h"
#include "baafe/transport.h"
#include "baafe/vault.h"
#include "nlohmann/json.hpp"

namespace baafe::protocol {

// KeyHandoff and KeyResponse only ever travel between server and extractor.
enum class MessageType {
  kEnrollRequest,
  kKeyHandoff,
  kVaultDelivery,
  kEnrollAck,
  kAuthRequest,
  kAuthChallenge,
  kKeyResponse,
  kAuthResult,
};

std::string MessageTypeName(MessageType t);
std::optional<MessageType> ParseMessageType(const std::string& name);

// Enrollment knobs chosen by the client and forwarded to the extractor.
struct EnrollParams {
  vault::SecurityParams sec;
  extractor::ThresholdPolicy thresholds;
  bool force = false;  // replace an existing enrollment
};

nlohmann::json ToJson(const EnrollParams& p);
EnrollParams EnrollParamsFromJson(const nlohmann::json& j);

struct Message {
  MessageType type = MessageType::kEnrollRequest;
  std::string corr_id;
  std::string app_id;
  std::optional<std::string> key_hex;
  std::optional<nlohmann::json> vault;
  std::optional<bool> accepted;
  std::optional<std::string> error;  // "<ErrorCode name>: detail"
  std::optional<EnrollParams> params;
};

nlohmann::json ToJson(const Message& m);
// Throws kSchemaError.
Message MessageFromJson(const nlohmann::json& j);

void SendMessage(Connection& c, const Message& m);
// Throws kTransport if the peer hangs up instead of answering.
Message ReceiveMessage(Connection& c);

std::string NewCorrelationId();

std::string ErrorToWire(const Error& e);
// Rebuilds an Error from its wire form; unknown codes map to `fallback`.
Error ErrorFromWire(const std::string& wire, ErrorCode fallback);

nlohmann::json VaultToWire(const vault::Vault& v);
vault::Vault VaultFromWire(const nlohmann::json& j);

}  // namespace baafe::protocol

#endif  // BAAFE_PROTOCOL_H_
