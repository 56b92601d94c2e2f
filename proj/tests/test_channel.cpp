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

#include <doctest.h>

using namespace flowfabric;
using namespace flowfabric::ofp;

namespace {

class FakeServices : public DatapathServices {
 public:
  std::optional<FlowModError> apply_flow_mod(
      const FlowModRequest& req) override {
    flow_mods.push_back(req);
    return flow_mod_result;
  }
  std::optional<FlowModError> apply_table_mod(std::uint8_t table_id,
                                              std::uint32_t config) override {
    table_mods.emplace_back(table_id, config);
    return std::nullopt;
  }
  std::optional<FlowModError> packet_out(std::uint32_t buffer_id,
                                         std::uint32_t in_port,
                                         std::span<const Action> actions,
                                         BytesView payload) override {
    packet_outs.push_back(buffer_id);
    (void)in_port;
    (void)actions;
    (void)payload;
    return packet_out_result;
  }
  void reprocess_buffer(std::uint32_t buffer_id) override {
    reprocessed.push_back(buffer_id);
  }
  std::vector<FlowStatsRecord> flow_stats(const FlowStatsFilter&) override {
    return flow_stats_result;
  }
  std::vector<TableStatsRecord> table_stats() override {
    std::vector<TableStatsRecord> out;
    for (std::uint8_t t = 0; t < 4; ++t) {
      TableStatsRecord r;
      r.table_id = t;
      r.counters.lookup_count = 100 + t;
      r.counters.matched_count = 50 + t;
      r.counters.active_entries = t;
      out.push_back(r);
    }
    return out;
  }
  std::vector<PortStatsEntry> port_stats(std::uint32_t) override {
    return {PortStatsEntry{}};
  }
  std::vector<QueueStatsEntry> queue_stats(std::uint32_t,
                                           std::uint32_t) override {
    return {QueueStatsEntry{}};
  }
  std::uint16_t miss_send_len() const override { return msl; }
  void set_miss_send_len(std::uint16_t len) override { msl = len; }

  std::vector<FlowModRequest> flow_mods;
  std::vector<std::pair<std::uint8_t, std::uint32_t>> table_mods;
  std::vector<std::uint32_t> packet_outs;
  std::vector<std::uint32_t> reprocessed;
  std::optional<FlowModError> flow_mod_result;
  std::optional<FlowModError> packet_out_result;
  std::vector<FlowStatsRecord> flow_stats_result;
  std::uint16_t msl = 128;
};

struct Rig {
  ChannelConfig config;
  FakeServices services;
  OutboundQueue out;
  Channel channel{config, services, out};

  void deliver(const OfpMessage& msg, MonotonicNs now = 0) {
    Bytes wire = encode(msg);
    channel.on_message(std::get<OfpMessage>(decode(wire)), wire, now);
  }

  void negotiate() {
    channel.on_connected(0);
    deliver(make_message(1, Hello{}));
    while (out.dequeue()) {
    }
    REQUIRE(channel.state() == ChannelState::kNegotiated);
  }
};

}  // namespace

TEST_CASE("hello handshake negotiates version 1.3") {
  Rig rig;
  rig.channel.on_connected(0);
  auto hello = rig.out.dequeue();
  REQUIRE(hello.has_value());
  CHECK(std::holds_alternative<Hello>(hello->body));
  CHECK(rig.channel.state() == ChannelState::kAwaitHello);

  rig.deliver(make_message(9, Hello{}));
  CHECK(rig.channel.state() == ChannelState::kNegotiated);
  CHECK_FALSE(rig.out.dequeue().has_value());  // hello sent only once
}

TEST_CASE("incompatible hello fails the channel") {
  Rig rig;
  rig.channel.on_connected(0);
  while (rig.out.dequeue()) {
  }
  // Peer speaks only version 1 (header version byte 0x01).
  Bytes wire = from_hex("01 00 00 08 00 00 00 01");
  rig.channel.on_message(make_message(1, Hello{}), wire, 0);
  CHECK(rig.channel.state() == ChannelState::kFailed);
  auto err = rig.out.dequeue();
  REQUIRE(err.has_value());
  const auto& e = std::get<ErrorMsg>(err->body);
  CHECK(e.err_type == OFPET_HELLO_FAILED);
  CHECK(e.err_code == OFPHFC_INCOMPATIBLE);
}

TEST_CASE("hello with a version bitmap including 1.3 negotiates") {
  Rig rig;
  rig.channel.on_connected(0);
  while (rig.out.dequeue()) {
  }
  Hello hello;
  hello.elements = from_hex("00 01 00 08 00 00 00 10");  // bitmap bit 4
  Bytes wire = encode(make_message(2, hello));
  wire[0] = 0x05;  // pretend a higher max version; bitmap still has 1.3
  rig.channel.on_message(make_message(2, hello), wire, 0);
  CHECK(rig.channel.state() == ChannelState::kNegotiated);
}

TEST_CASE("echo request mirrors payload and xid") {
  Rig rig;
  rig.negotiate();
  rig.deliver(make_message(77, EchoRequest{from_hex("1122334455667788")}));
  auto reply = rig.out.dequeue();
  REQUIRE(reply.has_value());
  CHECK(reply->xid == 77);
  CHECK(std::get<EchoReply>(reply->body).payload ==
        from_hex("1122334455667788"));
}

TEST_CASE("features request answers with datapath facts") {
  Rig rig;
  rig.config = ChannelConfig{};
  rig.negotiate();
  rig.deliver(make_message(5, FeaturesRequest{}));
  auto reply = rig.out.dequeue();
  REQUIRE(reply.has_value());
  CHECK(reply->xid == 5);
  const auto& f = std::get<FeaturesReply>(reply->body);
  CHECK(f.datapath_id == rig.config.datapath_id);
  CHECK(f.n_tables == rig.config.n_tables);
  CHECK(f.capabilities == (OFPC_FLOW_STATS | OFPC_TABLE_STATS |
                           OFPC_PORT_STATS));
}

TEST_CASE("set-config then get-config round trips miss_send_len") {
  Rig rig;
  rig.negotiate();
  rig.deliver(make_message(6, SetConfig{0, 200}));
  CHECK(rig.services.msl == 200);
  rig.deliver(make_message(7, GetConfigRequest{}));
  auto reply = rig.out.dequeue();
  REQUIRE(reply.has_value());
  CHECK(std::get<GetConfigReply>(reply->body).miss_send_len == 200);
  CHECK(encode(*reply).size() % 8 == 0);
}

TEST_CASE("flow mods route to the datapath and errors echo the request") {
  Rig rig;
  rig.negotiate();

  FlowModMsg fm;
  fm.command = OFPFC_ADD;
  fm.priority = 9;
  OxmField in_port;
  in_port.field = FieldId::kInPort;
  in_port.value = from_hex("00000001");
  fm.match.fields.push_back(in_port);
  fm.instructions.push_back(WriteActionsInstr{{Action::output(2)}});

  rig.deliver(make_message(30, fm));
  REQUIRE(rig.services.flow_mods.size() == 1);
  CHECK(rig.services.flow_mods[0].priority == 9);
  CHECK_FALSE(rig.out.dequeue().has_value());

  rig.services.flow_mod_result =
      FlowModError{OFPET_FLOW_MOD_FAILED, OFPFMFC_TABLE_FULL};
  rig.deliver(make_message(31, fm));
  auto err = rig.out.dequeue();
  REQUIRE(err.has_value());
  CHECK(err->xid == 31);
  const auto& e = std::get<ErrorMsg>(err->body);
  CHECK(e.err_code == OFPFMFC_TABLE_FULL);
  CHECK((12 + e.data.size()) % 8 == 0);
  CHECK(e.data.size() >= 8);
}

TEST_CASE("flow mod with a buffer id reprocesses the buffered frame") {
  Rig rig;
  rig.negotiate();
  FlowModMsg fm;
  fm.command = OFPFC_ADD;
  fm.buffer_id = 42;
  rig.deliver(make_message(32, fm));
  REQUIRE(rig.services.reprocessed.size() == 1);
  CHECK(rig.services.reprocessed[0] == 42);
}

TEST_CASE("multipart table stats reply matches the datapath records") {
  Rig rig;
  rig.negotiate();
  MultipartRequest req;
  req.mp_type = OFPMP_TABLE;
  req.body = TableStatsRequestBody{};
  rig.deliver(make_message(40, req));
  auto reply = rig.out.dequeue();
  REQUIRE(reply.has_value());
  const auto& mp = std::get<MultipartReply>(reply->body);
  const auto& entries = std::get<std::vector<TableStatsEntry>>(mp.body);
  REQUIRE(entries.size() == 4);
  CHECK(entries[2].lookup_count == 102);
  CHECK(entries[2].matched_count == 52);
}

TEST_CASE("arbiter strict priority and FIFO within class") {
  Rig rig;
  rig.negotiate();

  // Fill from the lowest class up, then check the drain order.
  rig.out.enqueue(make_message(1, EchoReply{}));           // keepalive
  rig.out.enqueue(make_message(2, FeaturesReply{}));       // switch info
  rig.out.enqueue(make_message(3, MultipartReply{}));      // statistics
  rig.out.enqueue(make_message(4, PacketIn{}));            // packet-in
  rig.out.enqueue(make_message(5, PacketIn{}));
  rig.out.enqueue(make_message(6, PacketIn{}));

  std::vector<std::uint32_t> order;
  while (auto m = rig.out.dequeue()) order.push_back(m->xid);
  CHECK(order == std::vector<std::uint32_t>{4, 5, 6, 3, 2, 1});
}

TEST_CASE("empty queue dequeues nothing") {
  OutboundQueue q;
  CHECK_FALSE(q.dequeue().has_value());
}

TEST_CASE("continuous packet-in pressure starves the lower classes") {
  // Strict priority by construction: as long as the packet-in class stays
  // non-empty, nothing below it is served. This is the specified arbiter
  // behavior, not a defect.
  OutboundQueue q;
  q.enqueue(make_message(1, EchoReply{}));
  for (std::uint32_t i = 0; i < 50; ++i) {
    q.enqueue(make_message(100 + i, PacketIn{}));
    auto m = q.dequeue();
    REQUIRE(m.has_value());
    CHECK(std::holds_alternative<PacketIn>(m->body));
  }
  auto last = q.dequeue();  // pressure gone: the echo finally drains
  REQUIRE(last.has_value());
  CHECK(std::holds_alternative<EchoReply>(last->body));
}

TEST_CASE("bounded outbound classes drop and count on overflow") {
  OutboundQueue q(2);
  CHECK(q.enqueue(make_message(1, PacketIn{})));
  CHECK(q.enqueue(make_message(2, PacketIn{})));
  CHECK_FALSE(q.enqueue(make_message(3, PacketIn{})));
  CHECK(q.dropped() == 1);
  CHECK(q.enqueue(make_message(4, EchoReply{})));  // other classes unaffected
}

TEST_CASE("packet-in payloads are capped and 8-byte aligned") {
  CHECK(Channel::packet_in_payload_len(64, 128) == 62);
  CHECK(Channel::packet_in_payload_len(64, 64) == 62);
  CHECK(Channel::packet_in_payload_len(200, 128) == 126);
  CHECK(Channel::packet_in_payload_len(14, 128) == 14);
  CHECK((42 + Channel::packet_in_payload_len(14, 128)) % 8 == 0);

  Rig rig;
  rig.negotiate();
  RawFrame frame{3, Bytes(64, 0xab), 0};
  rig.channel.send_packet_in(7, OFPR_NO_MATCH, 0, ~0ull, frame, 128);
  auto msg = rig.out.dequeue();
  REQUIRE(msg.has_value());
  const auto& pi = std::get<PacketIn>(msg->body);
  CHECK(pi.buffer_id == 7);
  CHECK(pi.total_len == 64);
  CHECK(pi.payload.size() == 62);
  REQUIRE(pi.match.fields.size() == 1);
  CHECK(pi.match.fields[0].field == FieldId::kInPort);
  CHECK(load_be32(pi.match.fields[0].value.data()) == 3);
  Bytes wire = encode(*msg);
  CHECK(wire.size() % 8 == 0);
  CHECK(wire.size() == 42 + 62);
}

TEST_CASE("echo keep-alive emits on the interval and fails after misses") {
  Rig rig;
  rig.config.echo_interval = 5 * kNsPerSec;
  rig.config.echo_max_missed = 3;
  Channel ch(rig.config, rig.services, rig.out);
  ch.on_connected(0);
  Bytes hello_wire = encode(make_message(1, Hello{}));
  ch.on_message(make_message(1, Hello{}), hello_wire, 0);
  while (rig.out.dequeue()) {
  }

  ch.on_tick(1 * kNsPerSec);
  CHECK_FALSE(rig.out.dequeue().has_value());  // interval not reached

  // Three unanswered echo requests, then the liveness timeout trips.
  for (int i = 1; i <= 3; ++i) {
    ch.on_tick(static_cast<MonotonicNs>(i) * 5 * kNsPerSec);
    auto echo = rig.out.dequeue();
    REQUIRE(echo.has_value());
    CHECK(std::holds_alternative<EchoRequest>(echo->body));
    CHECK(ch.state() == ChannelState::kNegotiated);
  }
  ch.on_tick(20 * kNsPerSec);
  CHECK(ch.state() == ChannelState::kFailed);
}

TEST_CASE("an echo reply resets the liveness counter") {
  Rig rig;
  rig.config.echo_interval = 5 * kNsPerSec;
  Channel ch(rig.config, rig.services, rig.out);
  ch.on_connected(0);
  Bytes hello_wire = encode(make_message(1, Hello{}));
  ch.on_message(make_message(1, Hello{}), hello_wire, 0);
  while (rig.out.dequeue()) {
  }
  for (int i = 1; i <= 3; ++i) {
    ch.on_tick(static_cast<MonotonicNs>(i) * 5 * kNsPerSec);
    rig.out.dequeue();
  }
  Bytes reply_wire = encode(make_message(2, EchoReply{}));
  ch.on_message(make_message(2, EchoReply{}), reply_wire, 16 * kNsPerSec);
  ch.on_tick(20 * kNsPerSec);
  CHECK(ch.state() == ChannelState::kNegotiated);  // counter was reset
}

TEST_CASE("flow removed is emitted only with the send-flow-rem flag") {
  Rig rig;
  rig.negotiate();
  ExpiredFlow expired;
  expired.table_id = 1;
  expired.reason = OFPRR_HARD_TIMEOUT;
  expired.entry.match = MaskedKey::wildcard(kMatchKeyWidth);
  expired.entry.flags = 0;
  rig.channel.send_flow_removed(expired);
  CHECK_FALSE(rig.out.dequeue().has_value());

  expired.entry.flags = OFPFF_SEND_FLOW_REM;
  expired.duration_ns = 2 * kNsPerSec + 5;
  rig.channel.send_flow_removed(expired);
  auto msg = rig.out.dequeue();
  REQUIRE(msg.has_value());
  const auto& fr = std::get<FlowRemoved>(msg->body);
  CHECK(fr.table_id == 1);
  CHECK(fr.reason == OFPRR_HARD_TIMEOUT);
  CHECK(fr.duration_sec == 2);
  CHECK(fr.duration_nsec == 5);
}

TEST_CASE("unsupported message types are answered with bad-request") {
  Rig rig;
  rig.negotiate();
  Bytes wire = from_hex("04 0f 00 10 00 00 00 21 0000000000000000");
  auto decoded = decode(wire);
  rig.channel.on_message(std::get<OfpMessage>(decoded), wire, 0);
  auto err = rig.out.dequeue();
  REQUIRE(err.has_value());
  CHECK(err->xid == 0x21);
  const auto& e = std::get<ErrorMsg>(err->body);
  CHECK(e.err_type == OFPET_BAD_REQUEST);
  CHECK(e.err_code == OFPBRC_BAD_TYPE);
}

TEST_CASE("messages before negotiation draw an error") {
  Rig rig;
  rig.channel.on_connected(0);
  while (rig.out.dequeue()) {
  }
  rig.deliver(make_message(3, FeaturesRequest{}));
  auto err = rig.out.dequeue();
  REQUIRE(err.has_value());
  CHECK(std::holds_alternative<ErrorMsg>(err->body));
}

TEST_CASE("barrier request is answered in order") {
  Rig rig;
  rig.negotiate();
  rig.deliver(make_message(88, BarrierRequest{}));
  auto reply = rig.out.dequeue();
  REQUIRE(reply.has_value());
  CHECK(reply->xid == 88);
  CHECK(std::holds_alternative<BarrierReply>(reply->body));
}
