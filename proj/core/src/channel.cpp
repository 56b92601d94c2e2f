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

#include "flowfabric/channel.hpp"

#include <algorithm>

namespace flowfabric::ofp {

// -- OutboundQueue -----------------------------------------------------------

OutboundClass classify_outbound(const MessageBody& body) {
  if (std::holds_alternative<PacketIn>(body)) return OutboundClass::kPacketIn;
  if (std::holds_alternative<MultipartReply>(body)) {
    return OutboundClass::kStatistics;
  }
  if (std::holds_alternative<Hello>(body) ||
      std::holds_alternative<EchoRequest>(body) ||
      std::holds_alternative<EchoReply>(body)) {
    return OutboundClass::kKeepalive;
  }
  return OutboundClass::kSwitchInfo;
}

bool OutboundQueue::enqueue(OfpMessage msg) {
  {
    std::lock_guard lock(mu_);
    auto& q = classes_[static_cast<std::size_t>(classify_outbound(msg.body))];
    if (q.size() >= capacity_) {
      ++dropped_;
      return false;
    }
    q.push_back(std::move(msg));
  }
  cv_.notify_one();
  return true;
}

std::optional<OfpMessage> OutboundQueue::dequeue_locked() {
  for (auto& q : classes_) {
    if (!q.empty()) {
      OfpMessage msg = std::move(q.front());
      q.pop_front();
      return msg;
    }
  }
  return std::nullopt;
}

std::optional<OfpMessage> OutboundQueue::dequeue() {
  std::lock_guard lock(mu_);
  return dequeue_locked();
}

std::optional<OfpMessage> OutboundQueue::wait_dequeue(
    std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  // See housekeeping_loop: system_clock wait_until stays on the
  // pthread_cond_timedwait path that sanitizers intercept.
  cv_.wait_until(lock, std::chrono::system_clock::now() + timeout, [this] {
    for (const auto& q : classes_) {
      if (!q.empty()) return true;
    }
    return false;
  });
  return dequeue_locked();
}

std::size_t OutboundQueue::size() const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& q : classes_) n += q.size();
  return n;
}

std::uint64_t OutboundQueue::dropped() const {
  std::lock_guard lock(mu_);
  return dropped_;
}

// -- Channel -----------------------------------------------------------------

Channel::Channel(const ChannelConfig& config, DatapathServices& services,
                 OutboundQueue& out)
    : config_(config), services_(services), out_(out) {}

void Channel::reset() {
  std::lock_guard lock(mu_);
  state_.store(ChannelState::kAwaitHello);
  hello_sent_ = false;
  config_flags_ = OFPC_FRAG_NORMAL;
  last_echo_sent_ = 0;
  echo_pending_ = 0;
}

void Channel::enqueue(OfpMessage msg) { out_.enqueue(std::move(msg)); }

// Error data: a prefix of the offending message, at most 68 bytes, trimmed so
// the 12-byte error prelude plus data stays a multiple of 8.
void Channel::send_error(std::uint16_t err_type, std::uint16_t err_code,
                         BytesView offending, std::uint32_t xid) {
  std::size_t n = std::min<std::size_t>(offending.size(), 68);
  while (n > 0 && (12 + n) % 8 != 0) --n;
  ErrorMsg err;
  err.err_type = err_type;
  err.err_code = err_code;
  err.data.assign(offending.begin(), offending.begin() + n);
  enqueue(make_message(xid, std::move(err)));
}

void Channel::on_connected(MonotonicNs now) {
  std::lock_guard lock(mu_);
  if (!hello_sent_) {
    enqueue(make_message(next_xid(), Hello{}));
    hello_sent_ = true;
  }
  last_echo_sent_ = now;
}

void Channel::handle_hello(const Hello& hello, BytesView raw,
                           std::uint32_t xid) {
  // Version agreement: header version, refined by a VERSIONBITMAP element
  // when present.
  std::uint8_t peer_version = raw.empty() ? 0 : raw[0];
  bool compatible = peer_version >= kVersion;
  BytesReader r(hello.elements);
  try {
    while (r.remaining() >= 4) {
      std::uint16_t type = r.u16();
      std::uint16_t len = r.u16();
      if (len < 4) break;
      if (type == OFPHET_VERSIONBITMAP && len >= 8) {
        std::uint32_t bitmap = r.u32();
        compatible = bitmap & (1u << kVersion);
        break;
      }
      r.skip(len - 4 + (8 - len % 8) % 8);
    }
  } catch (const TruncatedRead&) {
    // Malformed elements: fall back to the header version comparison.
  }

  if (!compatible) {
    send_error(OFPET_HELLO_FAILED, OFPHFC_INCOMPATIBLE, raw, xid);
    state_.store(ChannelState::kFailed);
    return;
  }
  if (!hello_sent_) {
    enqueue(make_message(next_xid(), Hello{}));
    hello_sent_ = true;
  }
  state_.store(ChannelState::kNegotiated);
}

void Channel::handle_multipart(const MultipartRequest& req, BytesView raw,
                               std::uint32_t xid) {
  MultipartReply reply;
  reply.mp_type = req.mp_type;
  reply.flags = 0;

  switch (req.mp_type) {
    case OFPMP_DESC: {
      DescReply d;
      d.mfr_desc = "flowfabric";
      d.hw_desc = "software dataplane";
      d.sw_desc = "flowfabric 0.1.0";
      d.serial_num = "0";
      d.dp_desc = config_.dp_desc;
      reply.body = std::move(d);
      break;
    }
    case OFPMP_FLOW: {
      const auto& body = std::get<FlowStatsRequestBody>(req.body);
      auto key = match_to_key(body.match);
      if (std::holds_alternative<FlowModError>(key)) {
        const auto& e = std::get<FlowModError>(key);
        send_error(e.err_type, e.err_code, raw, xid);
        return;
      }
      FlowStatsFilter filter;
      filter.table_id = body.table_id;
      filter.out_port = body.out_port;
      filter.cookie = body.cookie;
      filter.cookie_mask = body.cookie_mask;
      filter.match = std::get<MaskedKey>(std::move(key));
      std::vector<FlowStatsEntry> entries;
      for (const FlowStatsRecord& rec : services_.flow_stats(filter)) {
        FlowStatsEntry e;
        e.table_id = rec.table_id;
        e.duration_sec = rec.duration_sec;
        e.duration_nsec = rec.duration_nsec;
        e.priority = rec.priority;
        e.idle_timeout = rec.idle_timeout;
        e.hard_timeout = rec.hard_timeout;
        e.flags = rec.flags;
        e.cookie = rec.cookie;
        e.packet_count = rec.packet_count;
        e.byte_count = rec.byte_count;
        e.match = key_to_match(rec.match);
        e.instructions = instructions_to_wire(rec.instructions);
        entries.push_back(std::move(e));
      }
      reply.body = std::move(entries);
      break;
    }
    case OFPMP_TABLE: {
      std::vector<TableStatsEntry> entries;
      for (const TableStatsRecord& rec : services_.table_stats()) {
        TableStatsEntry e;
        e.table_id = rec.table_id;
        e.active_count = rec.counters.active_entries;
        e.lookup_count = rec.counters.lookup_count;
        e.matched_count = rec.counters.matched_count;
        entries.push_back(e);
      }
      reply.body = std::move(entries);
      break;
    }
    case OFPMP_PORT_STATS: {
      const auto& body = std::get<PortStatsRequestBody>(req.body);
      reply.body = services_.port_stats(body.port_no);
      break;
    }
    case OFPMP_QUEUE: {
      const auto& body = std::get<QueueStatsRequestBody>(req.body);
      reply.body = services_.queue_stats(body.port_no, body.queue_id);
      break;
    }
    default:
      send_error(OFPET_BAD_REQUEST, OFPBRC_BAD_MULTIPART, raw, xid);
      return;
  }
  enqueue(OfpMessage{xid, std::move(reply)});
}

void Channel::on_message(const OfpMessage& msg, BytesView raw,
                         MonotonicNs now) {
  std::lock_guard lock(mu_);
  (void)now;

  if (const auto* hello = std::get_if<Hello>(&msg.body)) {
    handle_hello(*hello, raw, msg.xid);
    return;
  }
  if (const auto* echo = std::get_if<EchoRequest>(&msg.body)) {
    // Reply mirrors the payload verbatim and reuses the request xid.
    enqueue(make_message(msg.xid, EchoReply{echo->payload}));
    return;
  }
  if (std::holds_alternative<EchoReply>(msg.body)) {
    echo_pending_ = 0;
    return;
  }
  if (std::holds_alternative<ErrorMsg>(msg.body)) {
    return;  // controller-reported error; nothing to answer
  }
  if (state_.load() != ChannelState::kNegotiated) {
    send_error(OFPET_BAD_REQUEST, OFPBRC_BAD_TYPE, raw, msg.xid);
    return;
  }

  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, FeaturesRequest>) {
          FeaturesReply f;
          f.datapath_id = config_.datapath_id;
          f.n_buffers = config_.n_buffers;
          f.n_tables = config_.n_tables;
          f.auxiliary_id = 0;
          f.capabilities = OFPC_FLOW_STATS | OFPC_TABLE_STATS | OFPC_PORT_STATS;
          f.reserved = 0;
          enqueue(make_message(msg.xid, f));
        } else if constexpr (std::is_same_v<T, GetConfigRequest>) {
          GetConfigReply r;
          r.flags = config_flags_;
          r.miss_send_len = services_.miss_send_len();
          enqueue(make_message(msg.xid, r));
        } else if constexpr (std::is_same_v<T, SetConfig>) {
          config_flags_ = body.flags;
          services_.set_miss_send_len(body.miss_send_len);
        } else if constexpr (std::is_same_v<T, FlowModMsg>) {
          auto lowered = lower_flow_mod(body, config_.port_count);
          if (std::holds_alternative<FlowModError>(lowered)) {
            const auto& e = std::get<FlowModError>(lowered);
            send_error(e.err_type, e.err_code, raw, msg.xid);
            return;
          }
          const auto& req = std::get<FlowModRequest>(lowered);
          if (auto err = services_.apply_flow_mod(req)) {
            send_error(err->err_type, err->err_code, raw, msg.xid);
            return;
          }
          if (req.command == OFPFC_ADD && req.buffer_id != kNoBuffer) {
            services_.reprocess_buffer(req.buffer_id);
          }
        } else if constexpr (std::is_same_v<T, TableModMsg>) {
          if (auto err =
                  services_.apply_table_mod(body.table_id, body.config)) {
            send_error(err->err_type, err->err_code, raw, msg.xid);
          }
        } else if constexpr (std::is_same_v<T, PacketOut>) {
          if (auto err = validate_actions(body.actions, config_.port_count)) {
            send_error(err->err_type, err->err_code, raw, msg.xid);
            return;
          }
          if (auto err = services_.packet_out(body.buffer_id, body.in_port,
                                              body.actions, body.payload)) {
            send_error(err->err_type, err->err_code, raw, msg.xid);
          }
        } else if constexpr (std::is_same_v<T, MultipartRequest>) {
          handle_multipart(body, raw, msg.xid);
        } else if constexpr (std::is_same_v<T, BarrierRequest>) {
          // Processing is strictly in-order, so the barrier is already
          // satisfied by the time we see it.
          enqueue(make_message(msg.xid, BarrierReply{}));
        } else {
          // Switch-bound-only types and everything unsupported.
          send_error(OFPET_BAD_REQUEST, OFPBRC_BAD_TYPE, raw, msg.xid);
        }
      },
      msg.body);
}

void Channel::on_tick(MonotonicNs now) {
  std::lock_guard lock(mu_);
  if (state_.load() != ChannelState::kNegotiated) return;
  if (now - last_echo_sent_ < config_.echo_interval) return;
  if (echo_pending_ >= config_.echo_max_missed) {
    state_.store(ChannelState::kFailed);
    return;
  }
  enqueue(make_message(next_xid(), EchoRequest{}));
  ++echo_pending_;
  last_echo_sent_ = now;
}

std::size_t Channel::packet_in_payload_len(std::size_t frame_len,
                                           std::size_t cap) {
  // Packet-In prelude through the 2 pad bytes is 42 octets with the in_port
  // match; the payload is trimmed so the total stays a multiple of 8.
  std::size_t n = std::min(frame_len, cap);
  while (n > 0 && (42 + n) % 8 != 0) --n;
  return n;
}

void Channel::send_packet_in(std::uint32_t buffer_id, std::uint8_t reason,
                             std::uint8_t table_id, std::uint64_t cookie,
                             const RawFrame& frame, std::uint16_t payload_cap) {
  PacketIn p;
  p.buffer_id = buffer_id;
  p.total_len = static_cast<std::uint16_t>(frame.data.size());
  p.reason = reason;
  p.table_id = table_id;
  p.cookie = cookie;
  OxmField in_port;
  in_port.field = FieldId::kInPort;
  in_port.value.resize(4);
  store_be32(in_port.value.data(), frame.ingress_port);
  p.match.fields.push_back(std::move(in_port));
  std::size_t n = packet_in_payload_len(frame.data.size(), payload_cap);
  p.payload.assign(frame.data.begin(), frame.data.begin() + n);
  enqueue(make_message(next_xid(), std::move(p)));
}

void Channel::send_flow_removed(const ExpiredFlow& expired) {
  if (!(expired.entry.flags & OFPFF_SEND_FLOW_REM)) return;
  FlowRemoved f;
  f.cookie = expired.entry.cookie;
  f.priority = expired.entry.priority;
  f.reason = expired.reason;
  f.table_id = expired.table_id;
  f.duration_sec = static_cast<std::uint32_t>(expired.duration_ns / kNsPerSec);
  f.duration_nsec =
      static_cast<std::uint32_t>(expired.duration_ns % kNsPerSec);
  f.idle_timeout = expired.entry.idle_timeout;
  f.hard_timeout = expired.entry.hard_timeout;
  f.packet_count = expired.entry.counters.packet_count;
  f.byte_count = expired.entry.counters.byte_count;
  f.match = key_to_match(expired.entry.match);
  enqueue(make_message(next_xid(), std::move(f)));
}

}  // namespace flowfabric::ofp
