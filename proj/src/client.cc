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

#include "baafe/client.h"

namespace baafe::protocol {
namespace {

Message RoundTrip(const Endpoint& server, const Message& request, MessageType expected) {
  Connection c = Dial(server, std::chrono::minutes(5));
  SendMessage(c, request);
  Message reply = ReceiveMessage(c);
  if (reply.type != expected || reply.corr_id != request.corr_id) {
    throw Error(ErrorCode::kTransport, "unexpected reply " + MessageTypeName(reply.type));
  }
  return reply;
}

}  // namespace

vault::Vault ClientEnroll(const Endpoint& server, const std::string& app_id,
                          const EnrollParams& params) {
  Message req;
  req.type = MessageType::kEnrollRequest;
  req.corr_id = NewCorrelationId();
  req.app_id = app_id;
  req.params = params;
  const Message reply = RoundTrip(server, req, MessageType::kVaultDelivery);
  if (reply.error) throw ErrorFromWire(*reply.error, ErrorCode::kEnrollFailed);
  if (!reply.vault) throw Error(ErrorCode::kSchemaError, "VaultDelivery carries no vault");
  return VaultFromWire(*reply.vault);
}

bool ClientAuthenticate(const Endpoint& server, const std::string& app_id, const vault::Vault& v) {
  Message req;
  req.type = MessageType::kAuthRequest;
  req.corr_id = NewCorrelationId();
  req.app_id = app_id;
  req.vault = VaultToWire(v);
  const Message reply = RoundTrip(server, req, MessageType::kAuthResult);
  if (reply.error) {
    Error e = ErrorFromWire(*reply.error, ErrorCode::kAuthFailed);
    if (e.code() == ErrorCode::kUnknownApp || e.code() == ErrorCode::kTransport) throw e;
  }
  return reply.accepted.value_or(false);
}

}  // namespace baafe::protocol
