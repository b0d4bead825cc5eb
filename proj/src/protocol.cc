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

#include "baafe/protocol.h"

#include <array>
#include <cstdio>

#include "baafe/crypto.h"

namespace baafe::protocol {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<MessageType, const char*>, 8> kTypeNames = {{
    {MessageType::kEnrollRequest, "EnrollRequest"},
    {MessageType::kKeyHandoff, "KeyHandoff"},
    {MessageType::kVaultDelivery, "VaultDelivery"},
    {MessageType::kEnrollAck, "EnrollAck"},
    {MessageType::kAuthRequest, "AuthRequest"},
    {MessageType::kAuthChallenge, "AuthChallenge"},
    {MessageType::kKeyResponse, "KeyResponse"},
    {MessageType::kAuthResult, "AuthResult"},
}};

[[noreturn]] void Schema(const std::string& what) {
  throw Error(ErrorCode::kSchemaError, "message: " + what);
}

}  // namespace

std::string MessageTypeName(MessageType t) {
  for (const auto& [type, name] : kTypeNames) {
    if (type == t) return name;
  }
  return "Unknown";
}

std::optional<MessageType> ParseMessageType(const std::string& name) {
  for (const auto& [type, n] : kTypeNames) {
    if (name == n) return type;
  }
  return std::nullopt;
}

json ToJson(const EnrollParams& p) {
  return {{"n", p.sec.n},
          {"c", p.sec.c},
          {"d", p.sec.d},
          {"scheme", thresholds::SchemeKindName(p.thresholds.kind)},
          {"tau", p.thresholds.tau},
          {"divisor", p.thresholds.divisor},
          {"force", p.force}};
}

EnrollParams EnrollParamsFromJson(const json& j) {
  EnrollParams p;
  try {
    p.sec.n = j.at("n").get<size_t>();
    p.sec.c = j.at("c").get<size_t>();
    p.sec.d = j.at("d").get<size_t>();
    p.thresholds.kind = thresholds::ParseSchemeKind(j.at("scheme").get<std::string>());
    p.thresholds.tau = j.at("tau").get<double>();
    p.thresholds.divisor = j.at("divisor").get<double>();
    p.force = j.at("force").get<bool>();
  } catch (const json::exception& e) {
    Schema(std::string("bad params: ") + e.what());
  }
  return p;
}

json ToJson(const Message& m) {
  json j = {{"type", MessageTypeName(m.type)}, {"corr_id", m.corr_id}, {"app_id", m.app_id}};
  if (m.key_hex) j["key_hex"] = *m.key_hex;
  if (m.vault) j["vault"] = *m.vault;
  if (m.accepted) j["accepted"] = *m.accepted;
  if (m.error) j["error"] = *m.error;
  if (m.params) j["params"] = ToJson(*m.params);
  return j;
}

Message MessageFromJson(const json& j) {
  if (!j.is_object()) Schema("not an object");
  Message m;
  try {
    auto type = ParseMessageType(j.at("type").get<std::string>());
    if (!type) Schema("unknown type " + j.at("type").dump());
    m.type = *type;
    m.corr_id = j.at("corr_id").get<std::string>();
    m.app_id = j.at("app_id").get<std::string>();
    if (j.contains("key_hex")) m.key_hex = j["key_hex"].get<std::string>();
    if (j.contains("vault")) {
      if (!j["vault"].is_object()) Schema("vault must be an object");
      m.vault = j["vault"];
    }
    if (j.contains("accepted")) m.accepted = j["accepted"].get<bool>();
    if (j.contains("error")) m.error = j["error"].get<std::string>();
  } catch (const json::exception& e) {
    Schema(e.what());
  }
  if (j.contains("params")) m.params = EnrollParamsFromJson(j["params"]);
  return m;
}

void SendMessage(Connection& c, const Message& m) { c.Send(ToJson(m)); }

Message ReceiveMessage(Connection& c) {
  auto j = c.Receive();
  if (!j) throw Error(ErrorCode::kTransport, "peer closed the connection without replying");
  return MessageFromJson(*j);
}

std::string NewCorrelationId() { return ToHex(RandomBytes(8)); }

std::string ErrorToWire(const Error& e) { return e.what(); }

Error ErrorFromWire(const std::string& wire, ErrorCode fallback) {
  const auto colon = wire.find(':');
  if (colon != std::string::npos) {
    if (auto code = ErrorCodeFromName(wire.substr(0, colon))) {
      std::string detail = wire.substr(colon + 1);
      if (!detail.empty() && detail.front() == ' ') detail.erase(0, 1);
      return Error(*code, detail);
    }
  }
  return Error(fallback, wire);
}

json VaultToWire(const vault::Vault& v) { return json::parse(vault::SerializeVault(v)); }

vault::Vault VaultFromWire(const json& j) { return vault::DeserializeVault(j.dump()); }

}  // namespace baafe::protocol
