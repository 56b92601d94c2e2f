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

#include "flowfabric/switch_core.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowfabric {

Switch::Switch(const SwitchConfig& config)
    : config_(config),
      pipeline_(Pipeline::Config{config.table_count, config.table_capacity}),
      executor_(config.port_count),
      buffer_(config.packet_buffer_capacity),
      table_mod_config_(config.table_count),
      miss_send_len_(config.miss_send_len),
      started_at_(now_monotonic_ns()) {
  ports_.reserve(config.port_count);
  for (std::uint32_t i = 0; i < config.port_count; ++i) {
    ports_.push_back(std::make_unique<Port>());
  }
  ofp::ChannelConfig cc;
  cc.datapath_id = config.datapath_id;
  cc.n_buffers = static_cast<std::uint32_t>(config.packet_buffer_capacity);
  cc.n_tables = static_cast<std::uint8_t>(config.table_count);
  cc.port_count = config.port_count;
  cc.echo_interval = config.echo_interval;
  cc.echo_max_missed = config.echo_max_missed;
  channel_ = std::make_unique<ofp::Channel>(cc, *this, outbound_);
}

Switch::~Switch() { stop(); }

// -- ingress / egress ---------------------------------------------------------

bool Switch::ingress(std::uint32_t port, Bytes octets) {
  return ingress(port, std::move(octets), now_monotonic_ns());
}

bool Switch::ingress(std::uint32_t port, Bytes octets, MonotonicNs at) {
  if (port >= ports_.size()) {
    throw std::invalid_argument("ingress on unconfigured port " +
                                std::to_string(port));
  }
  Port& p = *ports_[port];
  p.counters.rx_packets.fetch_add(1, std::memory_order_relaxed);
  p.counters.rx_bytes.fetch_add(octets.size(), std::memory_order_relaxed);
  {
    std::lock_guard lock(ingress_mu_);
    if (p.input.size() >= config_.input_queue_capacity) {
      p.counters.rx_dropped.fetch_add(1, std::memory_order_relaxed);
      return false;
    }
    p.input.push_back(RawFrame{port, std::move(octets), at});
  }
  ingress_cv_.notify_one();
  return true;
}

std::optional<EgressFrame> Switch::pop_egress(std::uint32_t port) {
  if (port >= ports_.size()) return std::nullopt;
  Port& p = *ports_[port];
  std::lock_guard lock(p.out_mu);
  if (p.output.empty()) return std::nullopt;
  EgressFrame f = std::move(p.output.front());
  p.output.pop_front();
  return f;
}

std::size_t Switch::egress_depth(std::uint32_t port) const {
  if (port >= ports_.size()) return 0;
  const Port& p = *ports_[port];
  std::lock_guard lock(p.out_mu);
  return p.output.size();
}

bool Switch::enqueue_egress(std::uint32_t port, Bytes bytes,
                            MonotonicNs ingress_at) {
  Port& p = *ports_[port];
  std::lock_guard lock(p.out_mu);
  if (p.output.size() >= config_.output_queue_capacity) {
    p.counters.tx_dropped.fetch_add(1, std::memory_order_relaxed);
    return false;
  }
  p.counters.tx_packets.fetch_add(1, std::memory_order_relaxed);
  p.counters.tx_bytes.fetch_add(bytes.size(), std::memory_order_relaxed);
  p.output.push_back(EgressFrame{std::move(bytes), ingress_at});
  return true;
}

// -- arbitration ---------------------------------------------------------------

std::optional<RawFrame> Switch::arbitrate() {
  std::lock_guard lock(ingress_mu_);
  const std::size_t n = ports_.size();

  std::size_t chosen = n;
  if (config_.arbiter == ArbiterPolicy::kLongestQueue) {
    std::size_t best_depth = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      std::size_t port = (last_served_ + i) % n;
      std::size_t depth = ports_[port]->input.size();
      if (depth > best_depth) {  // first in rotation wins ties
        best_depth = depth;
        chosen = port;
      }
    }
  } else {
    for (std::size_t i = 1; i <= n; ++i) {
      std::size_t port = (last_served_ + i) % n;
      if (!ports_[port]->input.empty()) {
        chosen = port;
        break;
      }
    }
  }
  if (chosen >= n) return std::nullopt;

  last_served_ = chosen;
  RawFrame frame = std::move(ports_[chosen]->input.front());
  ports_[chosen]->input.pop_front();
  ++in_flight_;
  return frame;
}

// -- frame processing ----------------------------------------------------------

void Switch::settle_emissions(const RawFrame& frame,
                              const std::vector<Emission>& emissions,
                              std::uint16_t controller_cap) {
  std::uint64_t dispositions = 0;
  for (const Emission& e : emissions) {
    if (e.port == kPortController) {
      if (channel_) {
        RawFrame copy{frame.ingress_port, e.frame, frame.arrived_at};
        channel_->send_packet_in(kNoBuffer, ofp::OFPR_ACTION, 0, 0, copy,
                                 controller_cap);
      }
      delivered_to_controller_.fetch_add(1, std::memory_order_relaxed);
      ++dispositions;
    } else if (e.port < ports_.size()) {
      enqueue_egress(e.port, e.frame, frame.arrived_at);
      ++dispositions;  // success counts in tx, failure in tx_dropped
    } else {
      dropped_bad_port_.fetch_add(1, std::memory_order_relaxed);
      ++dispositions;
    }
  }
  if (dispositions > 1) {
    fanout_surplus_.fetch_add(dispositions - 1, std::memory_order_relaxed);
  }
  // Zero emissions means the executor already counted the drop
  // (empty action set or TTL expiry).
}

void Switch::process_frame(RawFrame frame) {
  const MonotonicNs now = now_monotonic_ns();
  const HeaderTuple tuple = parse(frame);
  PipelineResult result = pipeline_.process(tuple, frame.data.size(), now);

  if (std::holds_alternative<PipelineMaliciousDrop>(result)) {
    dropped_malicious_.fetch_add(1, std::memory_order_relaxed);
    return;
  }

  if (const auto* miss = std::get_if<PipelineMiss>(&result)) {
    if (config_.miss_policy_for(miss->table_id) == MissPolicy::kDrop) {
      dropped_miss_.fetch_add(1, std::memory_order_relaxed);
      return;
    }
    const std::uint16_t cap = miss_send_len_.load();
    RawFrame copy = frame;  // payload for the Packet-In
    auto id = buffer_.buffer(std::move(frame), miss->table_id, now);
    if (!id) {
      // Buffer exhausted: the frame is dropped and the Packet-In goes out
      // with NO_BUFFER and a truncated payload.
      dropped_buffer_full_.fetch_add(1, std::memory_order_relaxed);
    }
    if (channel_) {
      channel_->send_packet_in(id.value_or(kNoBuffer), ofp::OFPR_NO_MATCH,
                               miss->table_id, 0xffffffffffffffffull, copy,
                               cap);
    }
    return;
  }

  const auto& fwd = std::get<PipelineForward>(result);
  std::uint16_t controller_cap = kControllerMaxLenNoBuffer;
  if (fwd.actions.output_action &&
      fwd.actions.output_action->port == kPortController) {
    controller_cap = fwd.actions.output_action->max_len;
  }
  auto emissions = executor_.execute(frame, fwd.actions);
  settle_emissions(frame, emissions, controller_cap);
}

std::size_t Switch::pump(std::size_t max_frames) {
  std::size_t n = 0;
  while (n < max_frames) {
    auto frame = arbitrate();
    if (!frame) break;
    process_frame(std::move(*frame));
    {
      std::lock_guard lock(ingress_mu_);
      --in_flight_;
    }
    idle_cv_.notify_all();
    ++n;
  }
  return n;
}

// -- workers -------------------------------------------------------------------

void Switch::worker_loop() {
  while (true) {
    std::optional<RawFrame> frame;
    {
      std::unique_lock lock(ingress_mu_);
      ingress_cv_.wait(lock, [this] {
        if (stopping_) return true;
        for (const auto& p : ports_) {
          if (!p->input.empty()) return true;
        }
        return false;
      });
      bool any = false;
      for (const auto& p : ports_) any |= !p->input.empty();
      if (!any) {
        if (stopping_) return;
        continue;
      }
    }
    frame = arbitrate();
    if (!frame) continue;
    process_frame(std::move(*frame));
    {
      std::lock_guard lock(ingress_mu_);
      --in_flight_;
    }
    idle_cv_.notify_all();
  }
}

void Switch::housekeeping_loop() {
  while (true) {
    {
      std::unique_lock lock(ingress_mu_);
      // wait_until(system_clock) keeps the wait on pthread_cond_timedwait;
      // the steady-clock wait_for path is invisible to gcc-11 tsan. A
      // periodic poll does not care about wall-clock jumps.
      if (idle_cv_.wait_until(
              lock,
              std::chrono::system_clock::now() + std::chrono::milliseconds(100),
              [this] { return stopping_; })) {
        return;
      }
    }
    housekeeping(now_monotonic_ns());
  }
}

void Switch::start() {
  std::size_t n = std::max<std::size_t>(1, config_.workers);
  for (std::size_t i = 0; i < n; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
  housekeeper_ = std::thread([this] { housekeeping_loop(); });
}

void Switch::quiesce() {
  std::unique_lock lock(ingress_mu_);
  idle_cv_.wait(lock, [this] {
    if (in_flight_ != 0) return false;
    for (const auto& p : ports_) {
      if (!p->input.empty()) return false;
    }
    return true;
  });
}

void Switch::stop() {
  if (!workers_.empty()) quiesce();
  {
    std::lock_guard lock(ingress_mu_);
    stopping_ = true;
  }
  ingress_cv_.notify_all();
  idle_cv_.notify_all();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  workers_.clear();
  if (housekeeper_.joinable()) housekeeper_.join();
  {
    std::lock_guard lock(ingress_mu_);
    stopping_ = false;
  }
}

void Switch::housekeeping(MonotonicNs now) {
  for (const ExpiredFlow& expired : pipeline_.expire_flows(now)) {
    if (channel_) channel_->send_flow_removed(expired);
  }
  buffer_expired_.fetch_add(buffer_.expire(now, config_.buffer_ttl),
                            std::memory_order_relaxed);
  if (channel_) channel_->on_tick(now);
}

void Switch::reset_channel() {
  // The Channel object lives for the switch lifetime (dataplane threads hold
  // a reference); only its protocol state restarts, and stale outbound
  // messages from the previous connection are discarded.
  while (outbound_.dequeue()) {
  }
  channel_->reset();
}

// -- observability -------------------------------------------------------------

PortCountersSnapshot Switch::port_counters(std::uint32_t port) const {
  PortCountersSnapshot s;
  if (port >= ports_.size()) return s;
  const PortCounters& c = ports_[port]->counters;
  s.rx_packets = c.rx_packets.load();
  s.rx_bytes = c.rx_bytes.load();
  s.tx_packets = c.tx_packets.load();
  s.tx_bytes = c.tx_bytes.load();
  s.rx_dropped = c.rx_dropped.load();
  s.tx_dropped = c.tx_dropped.load();
  return s;
}

ConservationReport Switch::conservation() const {
  ConservationReport r;
  for (const auto& p : ports_) {
    r.rx_total += p->counters.rx_packets.load();
    r.tx_total += p->counters.tx_packets.load();
    r.rx_dropped += p->counters.rx_dropped.load();
    r.tx_dropped += p->counters.tx_dropped.load();
  }
  r.injected = injected_.load();
  r.fanout_surplus = fanout_surplus_.load();
  r.delivered_to_controller = delivered_to_controller_.load();
  r.dropped_malicious = dropped_malicious_.load();
  r.dropped_miss = dropped_miss_.load();
  r.dropped_buffer_full = dropped_buffer_full_.load();
  r.dropped_empty_set = executor_.counters().dropped_empty.load();
  r.dropped_ttl = executor_.counters().dropped_ttl.load();
  r.dropped_bad_port = dropped_bad_port_.load();
  r.buffer_expired = buffer_expired_.load();
  r.buffered_live = buffer_.live();
  return r;
}

// -- DatapathServices ------------------------------------------------------------

std::optional<FlowModError> Switch::apply_flow_mod(const FlowModRequest& req) {
  return pipeline_.apply_flow_mod(req, now_monotonic_ns());
}

std::optional<FlowModError> Switch::apply_table_mod(std::uint8_t table_id,
                                                    std::uint32_t cfg) {
  if (table_id == ofp::kTableAll) {
    for (auto& c : table_mod_config_) c.store(cfg);
    return std::nullopt;
  }
  if (table_id >= table_mod_config_.size()) {
    return FlowModError{ofp::OFPET_TABLE_MOD_FAILED, ofp::OFPTMFC_BAD_TABLE};
  }
  // OpenFlow 1.3 table config bits are reserved; the value is stored and
  // reported but has no dataplane effect.
  table_mod_config_[table_id].store(cfg);
  return std::nullopt;
}

std::optional<FlowModError> Switch::packet_out(std::uint32_t buffer_id,
                                               std::uint32_t in_port,
                                               std::span<const Action> actions,
                                               BytesView payload) {
  RawFrame frame;
  if (buffer_id != kNoBuffer) {
    auto buffered = buffer_.release(buffer_id);
    if (!buffered) {
      return FlowModError{ofp::OFPET_BAD_REQUEST, ofp::OFPBRC_BUFFER_UNKNOWN};
    }
    frame = std::move(buffered->frame);
    if (in_port < ports_.size() || in_port == kPortController) {
      frame.ingress_port = in_port;
    }
  } else {
    if (payload.empty()) {
      return FlowModError{ofp::OFPET_BAD_REQUEST, ofp::OFPBRC_BAD_LEN};
    }
    frame.ingress_port = in_port;
    frame.data.assign(payload.begin(), payload.end());
    frame.arrived_at = now_monotonic_ns();
    injected_.fetch_add(1, std::memory_order_relaxed);
  }
  auto emissions = executor_.execute_list(frame, actions);
  settle_emissions(frame, emissions, kControllerMaxLenNoBuffer);
  return std::nullopt;
}

void Switch::reprocess_buffer(std::uint32_t buffer_id) {
  auto buffered = buffer_.release(buffer_id);
  if (!buffered) return;
  process_frame(std::move(buffered->frame));
}

std::vector<FlowStatsRecord> Switch::flow_stats(const FlowStatsFilter& f) {
  return pipeline_.collect_flow_stats(f, now_monotonic_ns());
}

std::vector<TableStatsRecord> Switch::table_stats() {
  return pipeline_.collect_table_stats();
}

std::vector<ofp::PortStatsEntry> Switch::port_stats(std::uint32_t port_no) {
  std::vector<ofp::PortStatsEntry> out;
  const MonotonicNs now = now_monotonic_ns();
  auto add = [&](std::uint32_t port) {
    PortCountersSnapshot c = port_counters(port);
    ofp::PortStatsEntry e;
    e.port_no = port;
    e.rx_packets = c.rx_packets;
    e.tx_packets = c.tx_packets;
    e.rx_bytes = c.rx_bytes;
    e.tx_bytes = c.tx_bytes;
    e.rx_dropped = c.rx_dropped;
    e.tx_dropped = c.tx_dropped;
    e.duration_sec = duration_sec(started_at_, now);
    e.duration_nsec = duration_nsec_part(started_at_, now);
    out.push_back(e);
  };
  if (port_no == kPortAny) {
    for (std::uint32_t p = 0; p < ports_.size(); ++p) add(p);
  } else if (port_no < ports_.size()) {
    add(port_no);
  }
  return out;
}

std::vector<ofp::QueueStatsEntry> Switch::queue_stats(std::uint32_t port_no,
                                                      std::uint32_t queue_id) {
  // One FIFO queue (id 0) per port; its counters mirror the port tx side.
  std::vector<ofp::QueueStatsEntry> out;
  if (queue_id != 0 && queue_id != ofp::kQueueAll) return out;
  const MonotonicNs now = now_monotonic_ns();
  auto add = [&](std::uint32_t port) {
    PortCountersSnapshot c = port_counters(port);
    ofp::QueueStatsEntry e;
    e.port_no = port;
    e.queue_id = 0;
    e.tx_bytes = c.tx_bytes;
    e.tx_packets = c.tx_packets;
    e.tx_errors = 0;
    e.duration_sec = duration_sec(started_at_, now);
    e.duration_nsec = duration_nsec_part(started_at_, now);
    out.push_back(e);
  };
  if (port_no == kPortAny) {
    for (std::uint32_t p = 0; p < ports_.size(); ++p) add(p);
  } else if (port_no < ports_.size()) {
    add(port_no);
  }
  return out;
}

}  // namespace flowfabric
