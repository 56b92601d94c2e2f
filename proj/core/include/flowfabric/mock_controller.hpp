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

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "flowfabric/net.hpp"
#include "flowfabric/ofp_codec.hpp"

namespace flowfabric {

// A scripted OpenFlow 1.3 controller peer: connects to the agent's socket,
// performs the Hello handshake, answers echo keep-alives, and records a full
// transcript for assertions.
class MockController {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    std::uint16_t port = 6633;
    std::chrono::milliseconds timeout{3000};
    bool auto_echo_reply = true;
  };

  struct TranscriptEntry {
    bool sent;  // true = controller -> switch
    ofp::OfpMessage msg;
    Bytes wire;
  };

  static std::optional<MockController> connect(const Options& options);

  // Sends our Hello and waits for the switch's. False on timeout.
  bool handshake();

  void send(const ofp::OfpMessage& msg);

  // Waits for a message matching `pred`, answering echo requests along the
  // way (when enabled). Non-matching messages stay in the transcript.
  std::optional<ofp::OfpMessage> await(
      const std::function<bool(const ofp::OfpMessage&)>& pred);

  template <typename T>
  std::optional<T> await_type() {
    auto msg = await([](const ofp::OfpMessage& m) {
      return std::holds_alternative<T>(m.body);
    });
    if (!msg) return std::nullopt;
    return std::get<T>(msg->body);
  }

  std::uint32_t next_xid() { return xid_++; }

  const std::vector<TranscriptEntry>& transcript() const {
    return transcript_;
  }
  // Human-readable transcript, for failure dumps.
  std::string transcript_dump() const;

  void close() { conn_.close(); }

 private:
  MockController() = default;

  std::optional<ofp::OfpMessage> read_one();

  net::TcpConn conn_;
  Options options_;
  std::uint32_t xid_ = 0x10000;
  std::vector<TranscriptEntry> transcript_;
};

// One step of a controller script: wait for a matching message, then send
// the responses. An empty `await` sends immediately.
struct ScriptStep {
  std::string name;
  std::function<bool(const ofp::OfpMessage&)> await;  // may be null
  std::vector<ofp::OfpMessage> respond;
};

// Runs the steps in order. On a step timeout returns false and fills
// `failure` with the step name plus the transcript.
bool run_script(MockController& controller, const std::vector<ScriptStep>& steps,
                std::string* failure);

}  // namespace flowfabric
