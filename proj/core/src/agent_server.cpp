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

#include "flowfabric/agent_server.hpp"

#include <chrono>

#include "flowfabric/ofp_codec.hpp"

namespace flowfabric {

AgentServer::AgentServer(Switch& sw, const std::string& host,
                         std::uint16_t port)
    : switch_(sw), host_(host), port_(port) {}

AgentServer::AgentServer(Switch& sw, const std::string& host,
                         std::uint16_t port, bool connect_mode)
    : switch_(sw), host_(host), port_(port), connect_mode_(connect_mode) {}

AgentServer::~AgentServer() { stop(); }

bool AgentServer::start() {
  running_.store(true);
  if (connect_mode_) {
    thread_ = std::thread([this] { dial_loop(); });
    return true;
  }
  auto listener = net::TcpListener::bind(host_, port_);
  if (!listener) return false;
  listener_ = std::move(*listener);
  bound_port_ = listener_.bound_port();
  thread_ = std::thread([this] { accept_loop(); });
  return true;
}

void AgentServer::stop() {
  running_.store(false);
  listener_.close();
  if (thread_.joinable()) thread_.join();
}

void AgentServer::accept_loop() {
  while (running_.load()) {
    auto conn = listener_.accept();
    if (!conn) break;  // listener closed
    serve(std::move(*conn));
  }
}

void AgentServer::dial_loop() {
  while (running_.load()) {
    auto conn = net::TcpConn::connect(host_, port_);
    if (conn) {
      serve(std::move(*conn));
    }
    for (int i = 0; i < 20 && running_.load(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
}

void AgentServer::serve(net::TcpConn conn) {
  switch_.reset_channel();
  ofp::Channel& channel = switch_.channel();
  ofp::OutboundQueue& out = switch_.outbound();
  channel.on_connected(now_monotonic_ns());
  connected_.store(true);

  std::atomic<bool> closing{false};
  std::thread writer([&] {
    while (!closing.load()) {
      auto msg = out.wait_dequeue(std::chrono::milliseconds(50));
      if (channel.state() == ofp::ChannelState::kFailed) break;
      if (!msg) continue;
      if (!conn.write_all(ofp::encode(*msg))) break;
    }
    conn.shutdown();  // unblocks the reader
  });

  Bytes buf;
  while (running_.load()) {
    std::uint8_t header[ofp::kHeaderBytes];
    if (!conn.read_exact(header, sizeof(header))) break;
    const std::uint16_t length = load_be16(header + 2);
    if (length < ofp::kHeaderBytes) break;  // framing error, fatal

    buf.assign(header, header + sizeof(header));
    buf.resize(length);
    if (length > ofp::kHeaderBytes &&
        !conn.read_exact(buf.data() + ofp::kHeaderBytes,
                         length - ofp::kHeaderBytes)) {
      break;
    }

    auto result = ofp::decode(buf);
    if (const auto* err = std::get_if<ofp::DecodeError>(&result)) {
      ofp::ErrorMsg e;
      e.err_type = err->err_type;
      e.err_code = err->err_code;
      std::size_t n = std::min<std::size_t>(buf.size(), 68);
      while (n > 0 && (12 + n) % 8 != 0) --n;
      e.data.assign(buf.begin(), buf.begin() + n);
      out.enqueue(ofp::make_message(load_be32(buf.data() + 4), std::move(e)));
      if (err->connection_fatal) break;
      continue;
    }
    channel.on_message(std::get<ofp::OfpMessage>(result), buf,
                       now_monotonic_ns());
    if (channel.state() == ofp::ChannelState::kFailed) break;
  }

  // Give the writer a moment to flush any final error, then tear down.
  for (int i = 0; i < 20 && !out.empty(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  closing.store(true);
  writer.join();
  connected_.store(false);
}

}  // namespace flowfabric
