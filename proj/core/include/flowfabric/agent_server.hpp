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

#include <atomic>
#include <string>
#include <thread>

#include "flowfabric/net.hpp"
#include "flowfabric/switch_core.hpp"

namespace flowfabric {

// Runs the OpenFlow channel over a stream socket: 8-byte header framing on
// the read side (framing relies solely on the OFP length field), the
// priority arbiter on the write side. One controller connection at a time;
// a reconnect gets fresh channel state.
class AgentServer {
 public:
  // Listen mode: controller connects to us. Port 0 = ephemeral.
  AgentServer(Switch& sw, const std::string& host, std::uint16_t port);
  // Connect mode: we dial the controller and retry while running.
  AgentServer(Switch& sw, const std::string& host, std::uint16_t port,
              bool connect_mode);
  ~AgentServer();

  // Binds (listen mode) and spins up the accept/dial thread. Returns false
  // when the listen socket cannot be bound.
  bool start();
  void stop();

  std::uint16_t bound_port() const { return bound_port_; }
  bool controller_connected() const { return connected_.load(); }

 private:
  void accept_loop();
  void dial_loop();
  void serve(net::TcpConn conn);

  Switch& switch_;
  std::string host_;
  std::uint16_t port_;
  bool connect_mode_ = false;
  std::uint16_t bound_port_ = 0;

  net::TcpListener listener_;
  std::thread thread_;
  std::atomic<bool> running_{false};
  std::atomic<bool> connected_{false};
};

}  // namespace flowfabric
