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
#include <cstdint>
#include <mutex>
#include <optional>

#include "flowfabric/flow_pipeline.hpp"
#include "flowfabric/ofp_codec.hpp"
#include "flowfabric/outbound_queue.hpp"

namespace flowfabric::ofp {

// What the channel needs from the switch. Implemented by switch_core; tests
// plug in fakes.
class DatapathServices {
 public:
  virtual ~DatapathServices() = default;

  virtual std::optional<FlowModError> apply_flow_mod(
      const FlowModRequest& req) = 0;
  virtual std::optional<FlowModError> apply_table_mod(std::uint8_t table_id,
                                                      std::uint32_t config) = 0;
  // Packet-Out: release `buffer_id` (or take `payload` when NO_BUFFER) and
  // run the action list. in_port seeds the frame's ingress for ALL flooding.
  virtual std::optional<FlowModError> packet_out(
      std::uint32_t buffer_id, std::uint32_t in_port,
      std::span<const Action> actions, BytesView payload) = 0;
  // FlowMod with a buffer id: push the buffered frame back through the
  // pipeline now that the flow is installed.
  virtual void reprocess_buffer(std::uint32_t buffer_id) = 0;

  virtual std::vector<FlowStatsRecord> flow_stats(
      const FlowStatsFilter& filter) = 0;
  virtual std::vector<TableStatsRecord> table_stats() = 0;
  virtual std::vector<PortStatsEntry> port_stats(std::uint32_t port_no) = 0;
  virtual std::vector<QueueStatsEntry> queue_stats(std::uint32_t port_no,
                                                   std::uint32_t queue_id) = 0;

  virtual std::uint16_t miss_send_len() const = 0;
  virtual void set_miss_send_len(std::uint16_t len) = 0;
};

struct ChannelConfig {
  std::uint64_t datapath_id = 1;
  std::uint32_t n_buffers = 256;
  std::uint8_t n_tables = 4;
  std::uint32_t port_count = 8;
  MonotonicNs echo_interval = 5 * kNsPerSec;
  int echo_max_missed = 3;
  std::string dp_desc = "flowfabric switch";
};

enum class ChannelState : std::uint8_t {
  kAwaitHello,
  kNegotiated,
  kFailed,  // version mismatch or echo timeout; connection should close
};

// Per-connection protocol state machine. Controller messages are processed
// strictly in arrival order; replies and notifications go out through the
// four-class arbiter queue. All entry points serialize on an internal mutex,
// so the socket reader, the timer and dataplane notifiers may call
// concurrently.
class Channel {
 public:
  Channel(const ChannelConfig& config, DatapathServices& services,
          OutboundQueue& out);

  // Back to a fresh pre-handshake state for a new controller connection.
  void reset();

  // Connection established: queue our Hello.
  void on_connected(MonotonicNs now);

  // One framed controller message. `raw` is the full wire form, used for
  // error payloads and Hello version negotiation.
  void on_message(const OfpMessage& msg, BytesView raw, MonotonicNs now);

  // Periodic housekeeping: echo keep-alive and liveness timeout.
  void on_tick(MonotonicNs now);

  // Dataplane notifications.
  void send_packet_in(std::uint32_t buffer_id, std::uint8_t reason,
                      std::uint8_t table_id, std::uint64_t cookie,
                      const RawFrame& frame, std::uint16_t payload_cap);
  void send_flow_removed(const ExpiredFlow& expired);

  ChannelState state() const { return state_.load(); }
  std::uint32_t next_xid() { return xid_.fetch_add(1); }

  // Payload length for an emitted Packet-In: at most min(frame_len, cap),
  // trimmed so the whole message stays a multiple of 8 bytes.
  static std::size_t packet_in_payload_len(std::size_t frame_len,
                                           std::size_t cap);

 private:
  void enqueue(OfpMessage msg);
  void send_error(std::uint16_t err_type, std::uint16_t err_code,
                  BytesView offending, std::uint32_t xid);
  void handle_hello(const Hello& hello, BytesView raw, std::uint32_t xid);
  void handle_multipart(const MultipartRequest& req, BytesView raw,
                        std::uint32_t xid);

  ChannelConfig config_;
  DatapathServices& services_;
  OutboundQueue& out_;

  std::mutex mu_;
  std::atomic<ChannelState> state_{ChannelState::kAwaitHello};
  std::atomic<std::uint32_t> xid_{1};
  bool hello_sent_ = false;
  std::uint16_t config_flags_ = OFPC_FRAG_NORMAL;
  MonotonicNs last_echo_sent_ = 0;
  int echo_pending_ = 0;
};

}  // namespace flowfabric::ofp
