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

#include "baafe/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <list>
#include <mutex>
#include <thread>

#include "baafe/error.h"

namespace baafe::protocol {
namespace {

[[noreturn]] void TransportError(const std::string& what) {
  throw Error(ErrorCode::kTransport, what + ": " + std::strerror(errno));
}

addrinfo* Resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(ep.port);
  const int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints,
                             &res);
  if (rc != 0) return nullptr;
  return res;
}

}  // namespace

Endpoint ParseEndpoint(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw Error(ErrorCode::kInvalidConfig, "expected HOST:PORT, got '" + text + "'");
  }
  Endpoint ep;
  ep.host = text.substr(0, colon);
  if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') {
    ep.host = ep.host.substr(1, ep.host.size() - 2);
  }
  try {
    size_t used = 0;
    const unsigned long port = std::stoul(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1 || port > 65535) throw std::out_of_range("port");
    ep.port = static_cast<uint16_t>(port);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidConfig, "bad port in '" + text + "'");
  }
  return ep;
}

Connection::~Connection() {
  if (fd_ >= 0) ::close(fd_);
}

Connection& Connection::operator=(Connection&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

void Connection::SendFrame(const std::string& payload) {
  if (payload.size() > kMaxFrameBytes) throw Error(ErrorCode::kTransport, "frame too large");
  const uint32_t len = static_cast<uint32_t>(payload.size());
  std::string buf;
  buf.reserve(4 + payload.size());
  for (int shift = 24; shift >= 0; shift -= 8) buf.push_back(static_cast<char>((len >> shift) & 0xff));
  buf += payload;
  size_t sent = 0;
  while (sent < buf.size()) {
    const ssize_t n = ::send(fd_, buf.data() + sent, buf.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      TransportError("send failed");
    }
    sent += static_cast<size_t>(n);
  }
}

std::optional<std::string> Connection::ReceiveFrame() {
  auto read_exact = [&](char* dst, size_t len, bool allow_eof) -> bool {
    size_t got = 0;
    while (got < len) {
      const ssize_t n = ::recv(fd_, dst + got, len - got, 0);
      if (n == 0) {
        if (allow_eof && got == 0) return false;
        throw Error(ErrorCode::kTransport, "connection closed mid-frame");
      }
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK) {
          throw Error(ErrorCode::kTransport, "receive timed out");
        }
        TransportError("recv failed");
      }
      got += static_cast<size_t>(n);
    }
    return true;
  };
  unsigned char header[4];
  if (!read_exact(reinterpret_cast<char*>(header), 4, true)) return std::nullopt;
  const uint32_t len = (uint32_t{header[0]} << 24) | (uint32_t{header[1]} << 16) |
                       (uint32_t{header[2]} << 8) | uint32_t{header[3]};
  if (len > kMaxFrameBytes) throw Error(ErrorCode::kTransport, "frame too large");
  std::string payload(len, '\0');
  if (len > 0) read_exact(payload.data(), len, false);
  return payload;
}

void Connection::Send(const nlohmann::json& message) { SendFrame(message.dump()); }

std::optional<nlohmann::json> Connection::Receive() {
  auto frame = ReceiveFrame();
  if (!frame) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(*frame);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("frame is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kTransport, "frame is not a JSON object");
  return j;
}

void Connection::SetTimeout(std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

Connection Dial(const Endpoint& ep, std::chrono::milliseconds timeout) {
  addrinfo* res = Resolve(ep, false);
  if (!res) throw Error(ErrorCode::kTransport, "cannot resolve " + ep.ToString());
  int last_errno = 0;
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      freeaddrinfo(res);
      const int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
      Connection c(fd);
      c.SetTimeout(timeout);
      return c;
    }
    last_errno = errno;
    ::close(fd);
  }
  freeaddrinfo(res);
  errno = last_errno;
  TransportError("cannot connect to " + ep.ToString());
}

Listener::Listener(const Endpoint& ep) {
  addrinfo* res = Resolve(ep, true);
  if (!res) throw Error(ErrorCode::kBindError, "cannot resolve " + ep.ToString());
  std::string why = "no usable address";
  for (addrinfo* ai = res; ai; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      fd_ = fd;
      break;
    }
    why = std::strerror(errno);
    ::close(fd);
  }
  freeaddrinfo(res);
  if (fd_ < 0) throw Error(ErrorCode::kBindError, "cannot bind " + ep.ToString() + ": " + why);
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  if (addr.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  } else {
    port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<Connection> Listener::Accept(std::chrono::milliseconds poll) {
  pollfd pfd{fd_, POLLIN, 0};
  const int rc = ::poll(&pfd, 1, static_cast<int>(poll.count()));
  if (rc <= 0) return std::nullopt;
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return Connection(fd);
}

void ServeConnections(Listener& listener, const std::atomic<bool>& stop,
                      const std::function<void(Connection&)>& handler) {
  struct Worker {
    std::thread thread;
    std::atomic<bool> done{false};
  };
  std::list<Worker> workers;
  auto reap = [&] {
    for (auto it = workers.begin(); it != workers.end();) {
      if (it->done.load()) {
        it->thread.join();
        it = workers.erase(it);
      } else {
        ++it;
      }
    }
  };
  while (!stop.load()) {
    reap();
    auto conn = listener.Accept(std::chrono::milliseconds(100));
    if (!conn) continue;
    Worker& w = workers.emplace_back();
    w.thread = std::thread([&handler, &w, c = std::move(*conn)]() mutable {
      c.SetTimeout(std::chrono::minutes(5));
      try {
        handler(c);
      } catch (const std::exception&) {
        // The peer sees the connection drop; the listener keeps serving.
      }
      w.done = true;
    });
  }
  for (auto& w : workers) w.thread.join();
}

}  // namespace baafe::protocol
