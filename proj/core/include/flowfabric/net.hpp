// Copyright 2026 The flowfabric Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flowfabric/bytes.hpp"

namespace flowfabric::net {

// Thin RAII wrappers over POSIX stream sockets; enough for the OpenFlow
// channel and nothing more.

class TcpConn {
 public:
  TcpConn() = default;
  explicit TcpConn(int fd) : fd_(fd) {}
  ~TcpConn();
  TcpConn(TcpConn&& other) noexcept;
  TcpConn& operator=(TcpConn&& other) noexcept;
  TcpConn(const TcpConn&) = delete;
  TcpConn& operator=(const TcpConn&) = delete;

  static std::optional<TcpConn> connect(const std::string& host,
                                        std::uint16_t port);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }

  // Reads exactly n bytes; false on EOF/error/closed socket.
  bool read_exact(std::uint8_t* out, std::size_t n);
  // Writes the whole buffer; false on error.
  bool write_all(BytesView data);
  // Caps how long a blocking read may wait. 0 = wait forever.
  void set_recv_timeout(std::uint32_t millis);
  // True when the last read_exact failed due to the receive timeout rather
  // than EOF or a hard error.
  bool timed_out() const { return timed_out_; }
  // Shuts the socket down, unblocking any reader.
  void shutdown();
  void close();

 private:
  int fd_ = -1;
  bool timed_out_ = false;
};

class TcpListener {
 public:
  TcpListener() = default;
  ~TcpListener();
  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // Binds and listens; port 0 picks an ephemeral port (see bound_port()).
  static std::optional<TcpListener> bind(const std::string& host,
                                         std::uint16_t port);

  bool valid() const { return fd_ >= 0; }
  std::uint16_t bound_port() const { return port_; }

  // Blocks until a peer connects; nullopt once closed.
  std::optional<TcpConn> accept();
  void close();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace flowfabric::net
