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

#include "baafe/services.h"

#include "baafe/behavior.h"
#include "baafe/crypto.h"
#include "baafe/encoder.h"
#include "baafe/random.h"

namespace baafe::protocol {
namespace {

Message Reply(MessageType type, const Message& request) {
  Message m;
  m.type = type;
  m.corr_id = request.corr_id;
  m.app_id = request.app_id;
  return m;
}

// Runs one connection: read a request, answer it, repeat until hang-up.
template <typename Service>
void Converse(Service& service, Connection& c) {
  while (true) {
    auto frame = c.Receive();
    if (!frame) return;
    Message request;
    try {
      request = MessageFromJson(*frame);
    } catch (const Error& e) {
      // Nothing to correlate with; answer once and drop the connection.
      c.Send({{"type", "AuthResult"}, {"corr_id", ""}, {"app_id", ""}, {"accepted", false},
              {"error", ErrorToWire(e)}});
      return;
    }
    SendMessage(c, service.Handle(request));
  }
}

// Feature vectors of every window in the behavior dataset, per app.
std::map<std::string, std::vector<behavior::FeatureVector>> LoadWindows(const std::string& path) {
  std::map<std::string, std::vector<behavior::FeatureVector>> out;
  for (const auto& [app, series] : behavior::Ingest(path)) {
    auto& fvs = out[app];
    for (const auto& w : behavior::SlideWindows(app, series)) {
      fvs.push_back(behavior::WindowFeatures(w));
    }
  }
  return out;
}

}  // namespace

std::unique_lock<std::mutex> KeyedMutex::Lock(const std::string& key) {
  std::mutex* m;
  {
    std::lock_guard<std::mutex> guard(mu_);
    auto& slot = locks_[key];
    if (!slot) slot = std::make_unique<std::mutex>();
    m = slot.get();
  }
  return std::unique_lock<std::mutex>(*m);
}

AuthServer::AuthServer(ServerOptions options)
    : options_(std::move(options)), registry_(options_.store), listener_(options_.bind) {}

void AuthServer::Serve(const std::atomic<bool>& stop) {
  ServeConnections(listener_, stop, [this](Connection& c) { Converse(*this, c); });
}

Message AuthServer::Handle(const Message& request) {
  switch (request.type) {
    case MessageType::kEnrollRequest:
      return Enroll(request);
    case MessageType::kAuthRequest:
      return Authenticate(request);
    default: {
      Message r = Reply(MessageType::kAuthResult, request);
      r.accepted = false;
      r.error = ErrorToWire(Error(ErrorCode::kSchemaError,
                                  MessageTypeName(request.type) + " is not a client request"));
      return r;
    }
  }
}

Message AuthServer::Enroll(const Message& request) {
  Message reply = Reply(MessageType::kVaultDelivery, request);
  if (request.app_id.empty()) {
    reply.error = ErrorToWire(Error(ErrorCode::kSchemaError, "app_id is empty"));
    return reply;
  }
  const EnrollParams params = request.params.value_or(EnrollParams{});
  auto lock = app_locks_.Lock(request.app_id);
  if (registry_.Find(request.app_id) && !params.force) {
    reply.error = ErrorToWire(
        Error(ErrorCode::kDuplicate, "app '" + request.app_id + "' is already enrolled"));
    return reply;
  }

  Bytes key = RandomBytes(32);
  const Digest key_hash = Sha256(key);
  Message handoff = Reply(MessageType::kKeyHandoff, request);
  handoff.key_hex = ToHex(key);
  handoff.params = params;
  SecureWipe(key);

  Message ack;
  try {
    Connection fe = Dial(options_.fe, options_.fe_timeout);
    SendMessage(fe, handoff);
    SecureWipe(*handoff.key_hex);
    ack = ReceiveMessage(fe);
  } catch (const Error& e) {
    SecureWipe(*handoff.key_hex);
    reply.error = ErrorToWire(Error(ErrorCode::kTransport, std::string("extractor: ") + e.what()));
    return reply;
  }
  if (ack.type != MessageType::kEnrollAck || ack.corr_id != request.corr_id) {
    reply.error = ErrorToWire(Error(ErrorCode::kTransport, "unexpected extractor reply"));
    return reply;
  }
  if (ack.error) {
    reply.error = ack.error;
    return reply;
  }
  try {
    if (!ack.vault) throw Error(ErrorCode::kSchemaError, "extractor sent no vault");
    const vault::Vault v = VaultFromWire(*ack.vault);
    if (v.app_id != request.app_id) throw Error(ErrorCode::kSchemaError, "vault app_id mismatch");
    registry_.Put(request.app_id, {key_hash, UtcTimestamp()});
    reply.vault = VaultToWire(v);
  } catch (const Error& e) {
    reply.error = ErrorToWire(e);
  }
  return reply;
}

Message AuthServer::Authenticate(const Message& request) {
  Message reply = Reply(MessageType::kAuthResult, request);
  reply.accepted = false;
  const auto entry = registry_.Find(request.app_id);
  if (!entry) {
    reply.error = ErrorToWire(
        Error(ErrorCode::kUnknownApp, "app '" + request.app_id + "' is not enrolled"));
    return reply;
  }
  if (!request.vault) {
    reply.error = ErrorToWire(Error(ErrorCode::kSchemaError, "AuthRequest carries no vault"));
    return reply;
  }
  Message challenge = Reply(MessageType::kAuthChallenge, request);
  challenge.vault = request.vault;
  Message response;
  try {
    Connection fe = Dial(options_.fe, options_.fe_timeout);
    SendMessage(fe, challenge);
    response = ReceiveMessage(fe);
  } catch (const Error& e) {
    reply.error = ErrorToWire(Error(ErrorCode::kTransport, std::string("extractor: ") + e.what()));
    return reply;
  }
  if (response.type != MessageType::kKeyResponse || response.corr_id != request.corr_id) {
    reply.error = ErrorToWire(Error(ErrorCode::kTransport, "unexpected extractor reply"));
    return reply;
  }
  if (!response.key_hex) {
    reply.error = response.error.value_or("AuthFailed: no key");
    return reply;
  }
  auto key = FromHex(*response.key_hex);
  SecureWipe(*response.key_hex);
  if (key) {
    reply.accepted = Sha256(*key) == entry->key_hash;
    SecureWipe(*key);
  }
  if (!*reply.accepted) {
    reply.error = ErrorToWire(Error(ErrorCode::kAuthFailed, "recovered key does not match"));
  }
  return reply;
}

FeService::FeService(FeOptions options)
    : options_(std::move(options)), store_(options_.store), listener_(options_.bind) {}

void FeService::Serve(const std::atomic<bool>& stop) {
  ServeConnections(listener_, stop, [this](Connection& c) { Converse(*this, c); });
}

Message FeService::Handle(const Message& request) {
  switch (request.type) {
    case MessageType::kKeyHandoff:
      return Enroll(request);
    case MessageType::kAuthChallenge:
      return Authenticate(request);
    default: {
      Message r = Reply(MessageType::kKeyResponse, request);
      r.error = ErrorToWire(Error(ErrorCode::kSchemaError,
                                  MessageTypeName(request.type) + " is not an extractor request"));
      return r;
    }
  }
}

Message FeService::Enroll(const Message& request) {
  Message reply = Reply(MessageType::kEnrollAck, request);
  std::optional<Bytes> key_bytes;
  try {
    if (!request.key_hex) throw Error(ErrorCode::kSchemaError, "KeyHandoff carries no key");
    key_bytes = FromHex(*request.key_hex);
    if (!key_bytes) throw Error(ErrorCode::kInvalidKey, "key_hex is not hex");
    const auto key = ffmath::KeyMaterial::FromBytes(*key_bytes);
    const EnrollParams params = request.params.value_or(EnrollParams{});

    auto lock = app_locks_.Lock(request.app_id);
    if (store_.Find(request.app_id) && !params.force) {
      throw Error(ErrorCode::kDuplicate, "app '" + request.app_id + "' is already enrolled");
    }
    const auto windows = LoadWindows(options_.data);
    auto it = windows.find(request.app_id);
    if (it == windows.end()) {
      throw Error(ErrorCode::kUnknownApp, "no behavior data for '" + request.app_id + "'");
    }
    std::vector<behavior::FeatureVector> fleet;
    for (const auto& [app, fvs] : windows) fleet.insert(fleet.end(), fvs.begin(), fvs.end());
    const auto normalization =
        encoder::CalibrateNormalization(fleet, encoder::NormalizationScheme::kMinMax);

    extractor::EnrollmentConfig cfg{params.sec, params.thresholds};
    const uint64_t seed =
        options_.seed ? DeriveSeed(*options_.seed, request.app_id) : EntropySeed();
    auto result = extractor::EnrollBehavior(request.app_id, it->second.back(), normalization,
                                            it->second, key, cfg, seed);
    store_.Put(result.record);
    reply.vault = VaultToWire(result.vault);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTooFewDistinctCodes || e.code() == ErrorCode::kChaffSpaceExhausted ||
        e.code() == ErrorCode::kZeroSpread) {
      reply.error = ErrorToWire(Error(ErrorCode::kEnrollFailed, e.what()));
    } else {
      reply.error = ErrorToWire(e);
    }
  }
  if (key_bytes) SecureWipe(*key_bytes);
  return reply;
}

Message FeService::Authenticate(const Message& request) {
  Message reply = Reply(MessageType::kKeyResponse, request);
  try {
    const auto record = store_.Find(request.app_id);
    if (!record) {
      throw Error(ErrorCode::kUnknownApp, "no extractor record for '" + request.app_id + "'");
    }
    if (!request.vault) throw Error(ErrorCode::kSchemaError, "AuthChallenge carries no vault");
    const vault::Vault v = VaultFromWire(*request.vault);
    if (v.app_id != request.app_id) throw Error(ErrorCode::kSchemaError, "vault app_id mismatch");
    const auto windows = LoadWindows(options_.data);
    auto it = windows.find(request.app_id);
    if (it == windows.end()) {
      throw Error(ErrorCode::kUnknownApp, "no behavior data for '" + request.app_id + "'");
    }
    extractor::AuthOptions opts{options_.max_attempts, EntropySeed()};
    const auto report = extractor::AuthenticateFeatures(it->second.back(), v, *record, opts);
    if (report.outcome.success()) {
      reply.key_hex = ToHex(report.outcome.key->bytes());
    } else {
      throw Error(ErrorCode::kAuthFailed,
                  "no combination reproduced the key (candidates " +
                      std::to_string(report.candidates) + ", attempts " +
                      std::to_string(report.outcome.attempts_used) + ")");
    }
  } catch (const Error& e) {
    reply.error = ErrorToWire(e);
  }
  return reply;
}

}  // namespace baafe::protocol
