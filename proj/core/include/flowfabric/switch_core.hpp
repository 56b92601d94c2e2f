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

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "flowfabric/action_engine.hpp"
#include "flowfabric/channel.hpp"
#include "flowfabric/flow_pipeline.hpp"
#include "flowfabric/switch_config.hpp"

namespace flowfabric {

struct PortCountersSnapshot {
  std::uint64_t rx_packets = 0;
  std::uint64_t rx_bytes = 0;
  std::uint64_t tx_packets = 0;
  std::uint64_t tx_bytes = 0;
  std::uint64_t rx_dropped = 0;
  std::uint64_t tx_dropped = 0;
};

struct EgressFrame {
  Bytes data;
  MonotonicNs ingress_at = 0;  // original arrival, for latency measurement
};

// Every admitted frame ends in exactly one disposition; fan-out beyond the
// first emission is tracked in `fanout_surplus` so the balance stays exact
// even for ALL floods and multi-output Packet-Out lists:
//
//   rx_total + injected + fanout_surplus ==
//       tx_total + rx_dropped + tx_dropped + delivered_to_controller
//     + dropped_malicious + dropped_miss + dropped_buffer_full
//     + dropped_empty_set + dropped_ttl + dropped_bad_port
//     + buffer_expired + buffered_live
struct ConservationReport {
  std::uint64_t rx_total = 0;
  std::uint64_t injected = 0;  // Packet-Out frames carried inline
  std::uint64_t fanout_surplus = 0;

  std::uint64_t tx_total = 0;
  std::uint64_t rx_dropped = 0;
  std::uint64_t tx_dropped = 0;
  std::uint64_t delivered_to_controller = 0;
  std::uint64_t dropped_malicious = 0;
  std::uint64_t dropped_miss = 0;
  std::uint64_t dropped_buffer_full = 0;
  std::uint64_t dropped_empty_set = 0;
  std::uint64_t dropped_ttl = 0;
  std::uint64_t dropped_bad_port = 0;
  std::uint64_t buffer_expired = 0;
  std::uint64_t buffered_live = 0;

  std::uint64_t lhs() const { return rx_total + injected + fanout_surplus; }
  std::uint64_t rhs() const {
    return tx_total + rx_dropped + tx_dropped + delivered_to_controller +
           dropped_malicious + dropped_miss + dropped_buffer_full +
           dropped_empty_set + dropped_ttl + dropped_bad_port +
           buffer_expired + buffered_live;
  }
  bool balanced() const { return lhs() == rhs(); }
};

// The switch: virtual ports with bounded input/output queues, the input
// arbiter, parser -> pipeline -> action engine wiring, the internal packet
// buffer and the controller channel.
class Switch : public ofp::DatapathServices {
 public:
  explicit Switch(const SwitchConfig& config);
  ~Switch() override;

  const SwitchConfig& config() const { return config_; }

  // -- ingress / egress ------------------------------------------------------

  // Enqueues a frame on a port's input queue; false when the queue is full
  // (the frame is dropped and counted). Throws on an unknown port.
  bool ingress(std::uint32_t port, Bytes octets);
  bool ingress(std::uint32_t port, Bytes octets, MonotonicNs at);

  std::optional<EgressFrame> pop_egress(std::uint32_t port);
  std::size_t egress_depth(std::uint32_t port) const;

  // -- dataplane driving -----------------------------------------------------

  // Picks the next frame per the arbiter policy: the non-empty input queue
  // with the greatest occupancy, ties broken round-robin from the last
  // served port (or pure round-robin when configured).
  std::optional<RawFrame> arbitrate();

  // One full pass: parse -> pipeline -> actions -> dispositions.
  void process_frame(RawFrame frame);

  // Synchronously drains input queues on the caller thread. Returns frames
  // processed.
  std::size_t pump(std::size_t max_frames = SIZE_MAX);

  // Worker threads (config.workers) plus a housekeeping timer.
  void start();
  // Graceful shutdown: drains in-flight frames, then stops the workers.
  void stop();
  // Blocks until all input queues are empty and workers are idle.
  void quiesce();

  // Flow/buffer expiry plus channel keep-alive. Driven by the housekeeping
  // thread when started; callable directly in tests.
  void housekeeping(MonotonicNs now);

  // -- controller channel ----------------------------------------------------

  ofp::Channel& channel() { return *channel_; }
  ofp::OutboundQueue& outbound() { return outbound_; }
  // Fresh protocol state for a new controller connection; clears any stale
  // outbound messages.
  void reset_channel();

  // -- observability ---------------------------------------------------------

  PortCountersSnapshot port_counters(std::uint32_t port) const;
  ConservationReport conservation() const;
  Pipeline& pipeline() { return pipeline_; }
  const Pipeline& pipeline() const { return pipeline_; }
  PacketBuffer& packet_buffer() { return buffer_; }

  // -- DatapathServices ------------------------------------------------------

  std::optional<FlowModError> apply_flow_mod(
      const FlowModRequest& req) override;
  std::optional<FlowModError> apply_table_mod(std::uint8_t table_id,
                                              std::uint32_t cfg) override;
  std::optional<FlowModError> packet_out(std::uint32_t buffer_id,
                                         std::uint32_t in_port,
                                         std::span<const Action> actions,
                                         BytesView payload) override;
  void reprocess_buffer(std::uint32_t buffer_id) override;
  std::vector<FlowStatsRecord> flow_stats(
      const FlowStatsFilter& filter) override;
  std::vector<TableStatsRecord> table_stats() override;
  std::vector<ofp::PortStatsEntry> port_stats(std::uint32_t port_no) override;
  std::vector<ofp::QueueStatsEntry> queue_stats(std::uint32_t port_no,
                                                std::uint32_t queue_id) override;
  std::uint16_t miss_send_len() const override {
    return miss_send_len_.load();
  }
  void set_miss_send_len(std::uint16_t len) override {
    miss_send_len_.store(len);
  }

 private:
  struct PortCounters {
    std::atomic<std::uint64_t> rx_packets{0};
    std::atomic<std::uint64_t> rx_bytes{0};
    std::atomic<std::uint64_t> tx_packets{0};
    std::atomic<std::uint64_t> tx_bytes{0};
    std::atomic<std::uint64_t> rx_dropped{0};
    std::atomic<std::uint64_t> tx_dropped{0};
  };

  struct Port {
    std::deque<RawFrame> input;  // guarded by ingress_mu_
    mutable std::mutex out_mu;
    std::deque<EgressFrame> output;
    PortCounters counters;
  };

  // Routes one execution's emissions to output queues / the controller and
  // settles the frame's disposition accounting. `from_buffer` marks frames
  // whose arrival was already counted.
  void settle_emissions(const RawFrame& frame,
                        const std::vector<Emission>& emissions,
                        std::uint16_t controller_cap);
  bool enqueue_egress(std::uint32_t port, Bytes bytes, MonotonicNs ingress_at);
  void worker_loop();
  void housekeeping_loop();

  SwitchConfig config_;
  Pipeline pipeline_;
  ActionExecutor executor_;
  PacketBuffer buffer_;
  std::vector<std::unique_ptr<Port>> ports_;
  std::vector<std::atomic<std::uint32_t>> table_mod_config_;

  mutable std::mutex ingress_mu_;
  std::condition_variable ingress_cv_;
  std::condition_variable idle_cv_;
  std::size_t last_served_ = 0;
  std::size_t in_flight_ = 0;  // frames dequeued but not yet settled
  bool stopping_ = false;

  std::vector<std::thread> workers_;
  std::thread housekeeper_;

  ofp::OutboundQueue outbound_;
  std::unique_ptr<ofp::Channel> channel_;
  std::atomic<std::uint16_t> miss_send_len_;
  MonotonicNs started_at_;

  // Dataplane drop buckets beyond the executor's own counters.
  std::atomic<std::uint64_t> dropped_malicious_{0};
  std::atomic<std::uint64_t> dropped_miss_{0};
  std::atomic<std::uint64_t> dropped_buffer_full_{0};
  std::atomic<std::uint64_t> dropped_bad_port_{0};
  std::atomic<std::uint64_t> delivered_to_controller_{0};
  std::atomic<std::uint64_t> buffer_expired_{0};
  std::atomic<std::uint64_t> injected_{0};
  std::atomic<std::uint64_t> fanout_surplus_{0};
};

}  // namespace flowfabric
