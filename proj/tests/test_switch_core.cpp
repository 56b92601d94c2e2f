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

#include <doctest.h>

#include <random>

#include "support/frame_builder.hpp"

using namespace flowfabric;
using namespace flowfabric::testsupport;

namespace {

Bytes udp_frame(std::uint16_t dst_port = 53, std::size_t payload = 18) {
  FrameSpec spec;
  spec.ipv4 = L3Spec{.proto = kIpProtoUdp};
  spec.l4_dst = dst_port;
  spec.payload = payload;
  return build_frame(spec);
}

void install_port_flow(Switch& sw, std::uint32_t in_port,
                       std::uint32_t out_port) {
  FlowModRequest req;
  req.command = ofp::OFPFC_ADD;
  req.table_id = 0;
  req.priority = 1;
  req.match = MaskedKey::wildcard(kMatchKeyWidth);
  apply_field(req.match, FieldId::kInPort, in_port, std::nullopt);
  req.instructions.write_actions = {{Action::output(out_port)}};
  REQUIRE_FALSE(sw.apply_flow_mod(req).has_value());
}

SwitchConfig small_config() {
  SwitchConfig cfg;
  cfg.port_count = 4;
  cfg.input_queue_capacity = 8;
  cfg.output_queue_capacity = 1024;
  cfg.table_count = 2;
  cfg.table_capacity = 32;
  cfg.packet_buffer_capacity = 4;
  cfg.controller_mode = SwitchConfig::ControllerMode::kNone;
  return cfg;
}

}  // namespace

TEST_CASE("ingress counts and bounds") {
  Switch sw(small_config());

  SUBCASE("accepted frame counts rx") {
    CHECK(sw.ingress(0, udp_frame()));
    CHECK(sw.port_counters(0).rx_packets == 1);
    CHECK(sw.port_counters(0).rx_dropped == 0);
  }

  SUBCASE("full queue drops and counts") {
    for (int i = 0; i < 8; ++i) CHECK(sw.ingress(1, udp_frame()));
    CHECK_FALSE(sw.ingress(1, udp_frame()));
    CHECK(sw.port_counters(1).rx_dropped == 1);
  }

  SUBCASE("burst of 10x capacity admits exactly capacity") {
    for (int i = 0; i < 80; ++i) sw.ingress(2, udp_frame());
    auto c = sw.port_counters(2);
    CHECK(c.rx_packets == 80);
    CHECK(c.rx_dropped == 72);
  }

  SUBCASE("unknown port throws") {
    CHECK_THROWS_AS(sw.ingress(9, udp_frame()), std::invalid_argument);
  }
}

TEST_CASE("arbiter policies") {
  SUBCASE("only one non-empty queue is always chosen") {
    Switch sw(small_config());
    sw.ingress(3, udp_frame());
    auto f = sw.arbitrate();
    REQUIRE(f.has_value());
    CHECK(f->ingress_port == 3);
  }

  SUBCASE("longest queue wins, ties break round-robin") {
    SwitchConfig cfg = small_config();
    cfg.input_queue_capacity = 16;
    cfg.port_count = 3;
    Switch sw(cfg);
    // Occupancies (5, 9, 9); last served starts at port 0.
    for (int i = 0; i < 5; ++i) sw.ingress(0, udp_frame());
    for (int i = 0; i < 9; ++i) sw.ingress(1, udp_frame());
    for (int i = 0; i < 9; ++i) sw.ingress(2, udp_frame());
    auto f = sw.arbitrate();
    REQUIRE(f.has_value());
    CHECK(f->ingress_port == 1);
    // Now (5, 8, 9): port 2 is strictly longest.
    f = sw.arbitrate();
    REQUIRE(f.has_value());
    CHECK(f->ingress_port == 2);
  }

  SUBCASE("pure round-robin rotates regardless of depth") {
    SwitchConfig cfg = small_config();
    cfg.arbiter = ArbiterPolicy::kRoundRobin;
    cfg.input_queue_capacity = 16;
    cfg.port_count = 3;
    Switch sw(cfg);
    for (int i = 0; i < 2; ++i) sw.ingress(0, udp_frame());
    for (int i = 0; i < 9; ++i) sw.ingress(1, udp_frame());
    for (int i = 0; i < 9; ++i) sw.ingress(2, udp_frame());
    // Rotation from last-served 0: ports 1, 2, 0, 1, 2, 0, then 0 is empty.
    std::vector<std::uint32_t> order;
    for (int i = 0; i < 8; ++i) {
      auto f = sw.arbitrate();
      REQUIRE(f.has_value());
      order.push_back(f->ingress_port);
    }
    CHECK(order == std::vector<std::uint32_t>{1, 2, 0, 1, 2, 0, 1, 2});
  }

  SUBCASE("equal rates are served within one frame of each other") {
    SwitchConfig cfg = small_config();
    cfg.input_queue_capacity = 64;
    Switch sw(cfg);
    std::vector<int> served(4, 0);
    for (int round = 0; round < 16; ++round) {
      for (std::uint32_t p = 0; p < 4; ++p) sw.ingress(p, udp_frame());
    }
    for (int window = 0; window < 16; ++window) {
      std::vector<int> in_window(4, 0);
      for (int k = 0; k < 4; ++k) {
        auto f = sw.arbitrate();
        REQUIRE(f.has_value());
        in_window[f->ingress_port]++;
        served[f->ingress_port]++;
      }
      for (int p = 0; p < 4; ++p) CHECK(in_window[p] <= 1 + 1);
    }
    for (int p = 0; p < 4; ++p) CHECK(served[p] == 16);
  }
}

TEST_CASE("end-to-end forwarding is byte-identical and in order") {
  Switch sw(small_config());
  install_port_flow(sw, 0, 1);

  std::vector<Bytes> sent;
  for (int i = 0; i < 100; ++i) {
    Bytes f = udp_frame(static_cast<std::uint16_t>(1000 + i));
    sent.push_back(f);
    REQUIRE(sw.ingress(0, std::move(f)));
    sw.pump();  // keep within the small input queue
  }
  REQUIRE(sw.egress_depth(1) == 100);
  for (int i = 0; i < 100; ++i) {
    auto out = sw.pop_egress(1);
    REQUIRE(out.has_value());
    CHECK(out->data == sent[i]);  // FIFO, unmodified
  }
  CHECK(sw.port_counters(1).tx_packets == 100);
  CHECK(sw.conservation().balanced());
}

TEST_CASE("table miss buffers the frame and queues a packet-in") {
  Switch sw(small_config());
  REQUIRE(sw.ingress(2, udp_frame()));
  sw.pump();

  CHECK(sw.packet_buffer().live() == 1);
  auto msg = sw.outbound().dequeue();
  REQUIRE(msg.has_value());
  const auto& pi = std::get<ofp::PacketIn>(msg->body);
  CHECK(pi.reason == ofp::OFPR_NO_MATCH);
  CHECK(pi.buffer_id != kNoBuffer);
  CHECK(pi.table_id == 0);

  // Releasing the buffer with an output action emits the original bytes.
  std::vector<Action> actions = {Action::output(3)};
  REQUIRE_FALSE(sw.packet_out(pi.buffer_id, 2, actions, {}).has_value());
  auto out = sw.pop_egress(3);
  REQUIRE(out.has_value());
  CHECK(sw.packet_buffer().live() == 0);
  CHECK(sw.conservation().balanced());
}

TEST_CASE("miss policy drop counts instead of buffering") {
  SwitchConfig cfg = small_config();
  cfg.default_miss_policy = MissPolicy::kDrop;
  Switch sw(cfg);
  REQUIRE(sw.ingress(0, udp_frame()));
  sw.pump();
  CHECK(sw.packet_buffer().live() == 0);
  CHECK(sw.conservation().dropped_miss == 1);
  CHECK(sw.conservation().balanced());
}

TEST_CASE("buffer exhaustion converts misses to drops with NO_BUFFER") {
  Switch sw(small_config());  // buffer capacity 4
  for (int i = 0; i < 6; ++i) REQUIRE(sw.ingress(0, udp_frame()));
  sw.pump();
  auto r = sw.conservation();
  CHECK(r.buffered_live == 4);
  CHECK(r.dropped_buffer_full == 2);
  CHECK(r.balanced());

  int no_buffer_pi = 0;
  while (auto msg = sw.outbound().dequeue()) {
    const auto& pi = std::get<ofp::PacketIn>(msg->body);
    if (pi.buffer_id == kNoBuffer) ++no_buffer_pi;
  }
  CHECK(no_buffer_pi == 2);
}

TEST_CASE("malicious frames drop before the tables") {
  Switch sw(small_config());
  install_port_flow(sw, 0, 1);
  FrameSpec bad;
  bad.ipv4 = L3Spec{.total_len_override = 4000};
  REQUIRE(sw.ingress(0, build_frame(bad)));
  sw.pump();
  CHECK(sw.egress_depth(1) == 0);
  CHECK(sw.conservation().dropped_malicious == 1);
  CHECK(sw.conservation().balanced());
}

TEST_CASE("packet-out injects a payload frame") {
  Switch sw(small_config());
  Bytes payload = udp_frame();
  std::vector<Action> actions = {Action::output(2)};
  auto err = sw.packet_out(kNoBuffer, kPortController, actions, payload);
  CHECK_FALSE(err.has_value());
  auto out = sw.pop_egress(2);
  REQUIRE(out.has_value());
  CHECK(out->data == payload);
  CHECK(sw.conservation().injected == 1);
  CHECK(sw.conservation().balanced());

  SUBCASE("unknown buffer id yields BUFFER_UNKNOWN") {
    auto bad = sw.packet_out(12345, 0, actions, {});
    REQUIRE(bad.has_value());
    CHECK(bad->err_code == ofp::OFPBRC_BUFFER_UNKNOWN);
  }
}

TEST_CASE("conservation holds across a mixed random workload") {
  std::mt19937_64 rng(31);
  SwitchConfig cfg = small_config();
  cfg.input_queue_capacity = 256;
  Switch sw(cfg);
  install_port_flow(sw, 0, 1);
  install_port_flow(sw, 1, 2);

  for (int i = 0; i < 500; ++i) {
    std::uint32_t port = static_cast<std::uint32_t>(rng() % 4);
    if (rng() % 7 == 0) {
      FrameSpec bad;
      bad.ipv4 = L3Spec{.ihl = 3};
      Bytes b = build_frame(bad);
      b[14] = 0x43;
      sw.ingress(port, std::move(b));
    } else {
      sw.ingress(port, udp_frame(static_cast<std::uint16_t>(rng() % 1000)));
    }
    if (i % 16 == 0) sw.pump();
  }
  sw.pump();
  auto r = sw.conservation();
  CHECK(r.balanced());
  CHECK(r.rx_total == 500);
}

TEST_CASE("identical counter totals for one and two workers") {
  auto run = [](std::size_t workers) {
    SwitchConfig cfg;
    cfg.port_count = 4;
    cfg.input_queue_capacity = 4096;
    cfg.output_queue_capacity = 8192;
    cfg.table_count = 2;
    cfg.table_capacity = 32;
    cfg.packet_buffer_capacity = 16;
    cfg.controller_mode = SwitchConfig::ControllerMode::kNone;
    cfg.workers = workers;
    Switch sw(cfg);
    install_port_flow(sw, 0, 1);
    install_port_flow(sw, 1, 2);
    install_port_flow(sw, 2, 3);
    sw.start();
    for (int i = 0; i < 2000; ++i) {
      sw.ingress(static_cast<std::uint32_t>(i % 3), udp_frame());
    }
    sw.stop();
    ConservationReport r = sw.conservation();
    return std::tuple(r.rx_total, r.tx_total, r.rhs(), r.balanced());
  };
  auto a = run(1);
  auto b = run(2);
  CHECK(a == b);
  CHECK(std::get<3>(a));
}

TEST_CASE("graceful stop drains in-flight frames") {
  SwitchConfig cfg = small_config();
  cfg.input_queue_capacity = 2048;
  Switch sw(cfg);
  install_port_flow(sw, 0, 1);
  sw.start();
  for (int i = 0; i < 1000; ++i) sw.ingress(0, udp_frame());
  sw.stop();
  CHECK(sw.port_counters(1).tx_packets == 1000);
  auto before = sw.conservation();
  CHECK(before.balanced());
  // Counters frozen after stop.
  CHECK(sw.conservation().rx_total == before.rx_total);
}

TEST_CASE("housekeeping expires flows and reaps stale buffers") {
  Switch sw(small_config());
  FlowModRequest req;
  req.command = ofp::OFPFC_ADD;
  req.table_id = 0;
  req.priority = 1;
  req.hard_timeout = 1;
  req.flags = ofp::OFPFF_SEND_FLOW_REM;
  req.match = MaskedKey::wildcard(kMatchKeyWidth);
  req.instructions.write_actions = {{Action::output(1)}};
  REQUIRE_FALSE(sw.apply_flow_mod(req).has_value());
  REQUIRE(sw.pipeline().collect_table_stats()[0].counters.active_entries == 1);

  sw.housekeeping(now_monotonic_ns() + 2 * kNsPerSec);
  CHECK(sw.pipeline().collect_table_stats()[0].counters.active_entries == 0);

  // The expiry produced a flow-removed notification for the controller.
  bool saw_flow_removed = false;
  while (auto msg = sw.outbound().dequeue()) {
    if (const auto* fr = std::get_if<ofp::FlowRemoved>(&msg->body)) {
      CHECK(fr->reason == ofp::OFPRR_HARD_TIMEOUT);
      CHECK(fr->table_id == 0);
      saw_flow_removed = true;
    }
  }
  CHECK(saw_flow_removed);
}
