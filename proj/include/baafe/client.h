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

#ifndef BAAFE_CLIENT_H_
#define BAAFE_CLIENT_H_

#include <string>

#include "baafe/protocol.h"
#include "baafe/transport.h"
#include "baafe/vault.h"

namespace baafe::protocol {

// Requests enrollment and returns the delivered vault. Server-reported
// failures are rethrown with their original code.
vault::Vault ClientEnroll(const Endpoint& server, const std::string& app_id,
                          const EnrollParams& params);

// True iff the server accepted. Throws kUnknownApp for unregistered apps.
bool ClientAuthenticate(const Endpoint& server, const std::string& app_id, const vault::Vault& v);

}  // namespace baafe::protocol

#endif  // BAAFE_CLIENT_H_
