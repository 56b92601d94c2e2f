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

#include "flowfabric/mock_controller.hpp"

#include <sstream>

namespace flowfabric {

std::optional<MockController> MockController::connect(const Options& options) {
  auto conn = net::TcpConn::connect(options.host, options.port);
  if (!conn) return std::nullopt;
  MockController mc;
  mc.conn_ = std::move(*conn);
  mc.options_ = options;
  mc.conn_.set_recv_timeout(100);
  return mc;
}

void MockController::send(const ofp::OfpMessage& msg) {
  Bytes wire = ofp::encode(msg);
  transcript_.push_back({true, msg, wire});
  conn_.write_all(wire);
}

std::optional<ofp::OfpMessage> MockController::read_one() {
  std::uint8_t header[ofp::kHeaderBytes];
  if (!conn_.read_exact(header, sizeof(header))) return std::nullopt;
  const std::uint16_t length = load_be16(header + 2);
  if (length < ofp::kHeaderBytes) return std::nullopt;
  Bytes buf(header, header + sizeof(header));
  buf.resize(length);
  if (length > ofp::kHeaderBytes &&
      !conn_.read_exact(buf.data() + ofp::kHeaderBytes,
                        length - ofp::kHeaderBytes)) {
    return std::nullopt;
  }
  auto result = ofp::decode(buf);
  if (!std::holds_alternative<ofp::OfpMessage>(result)) return std::nullopt;
  auto msg = std::get<ofp::OfpMessage>(std::move(result));
  transcript_.push_back({false, msg, std::move(buf)});
  return msg;
}

bool MockController::handshake() {
  send(ofp::make_message(next_xid(), ofp::Hello{}));
  auto hello = await([](const ofp::OfpMessage& m) {
    return std::holds_alternative<ofp::Hello>(m.body);
  });
  return hello.has_value();
}

std::optional<ofp::OfpMessage> MockController::await(
    const std::function<bool(const ofp::OfpMessage&)>& pred) {
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    auto msg = read_one();
    if (!msg) {
      if (conn_.timed_out()) continue;
      return std::nullopt;  // connection closed or undecodable
    }
    if (options_.auto_echo_reply) {
      if (const auto* echo = std::get_if<ofp::EchoRequest>(&msg->body)) {
        send(ofp::make_message(msg->xid, ofp::EchoReply{echo->payload}));
        continue;
      }
    }
    if (pred(*msg)) return msg;
  }
  return std::nullopt;
}

std::string MockController::transcript_dump() const {
  std::ostringstream os;
  for (const TranscriptEntry& e : transcript_) {
    os << (e.sent ? ">> " : "<< ") << ofp::describe(e.msg) << "\n";
  }
  return os.str();
}

bool run_script(MockController& controller,
                const std::vector<ScriptStep>& steps, std::string* failure) {
  for (const ScriptStep& step : steps) {
    if (step.await) {
      auto msg = controller.await(step.await);
      if (!msg) {
        if (failure) {
          *failure = "script step '" + step.name +
                     "' timed out; transcript:\n" +
                     controller.transcript_dump();
        }
        return false;
      }
    }
    for (const ofp::OfpMessage& r : step.respond) controller.send(r);
  }
  return true;
}

}  // namespace flowfabric
