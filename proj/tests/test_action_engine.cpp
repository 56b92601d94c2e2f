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

#include "flowfabric/action_engine.hpp"

#include <doctest.h>

#include <map>
#include <random>

#include "support/checksum_oracle.hpp"
#include "support/frame_builder.hpp"

using namespace flowfabric;
using namespace flowfabric::testsupport;

namespace {

RawFrame tcp_frame(std::uint32_t port = 0) {
  FrameSpec spec;
  spec.ipv4 = L3Spec{};
  spec.payload = 10;
  return RawFrame{port, build_frame(spec), 0};
}

ActionSet set_of(std::initializer_list<Action> actions) {
  ActionSet s;
  for (const Action& a : actions) s.write(a);
  return s;
}

}  // namespace

TEST_CASE("plain output emits the unmodified frame") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  auto out = ex.execute(f, set_of({Action::output(2)}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].port == 2);
  CHECK(out[0].frame == f.data);
}

TEST_CASE("push_vlan then set vid 100 produces the documented byte layout") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  auto out = ex.execute(
      f, set_of({Action::push_vlan(0x8100),
                 Action::set_field(FieldId::kVlanVid, 100),
                 Action::output(1)}));
  REQUIRE(out.size() == 1);
  const Bytes& m = out[0].frame;
  CHECK(m.size() == f.data.size() + 4);
  CHECK(m[12] == 0x81);
  CHECK(m[13] == 0x00);
  CHECK(m[14] == 0x00);
  CHECK(m[15] == 0x64);
  CHECK(load_be16(m.data() + 16) == kEthTypeIpv4);  // original EtherType

  // Reference decode of the mutated frame sees the tag.
  HeaderTuple t = parse(RawFrame{0, m, 0});
  CHECK(t.vlan_vid == 100);
  CHECK(t.eth_type == kEthTypeIpv4);
}

TEST_CASE("dec_ttl at TTL 1 drops the packet") {
  ActionExecutor ex(8);
  FrameSpec spec;
  spec.ipv4 = L3Spec{.ttl = 1};
  RawFrame f{0, build_frame(spec), 0};
  auto out = ex.execute(f, set_of({Action::dec_nw_ttl(), Action::output(2)}));
  CHECK(out.empty());
  CHECK(ex.counters().dropped_ttl.load() == 1);
}

TEST_CASE("dec_ttl above 1 decrements and fixes the checksum") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  auto out = ex.execute(f, set_of({Action::dec_nw_ttl(), Action::output(2)}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].frame[14 + 8] == 63);
  CHECK(frame_ipv4_checksum_valid(out[0].frame));
}

TEST_CASE("set ipv4_dst recomputes a checksum the oracle accepts") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  auto out = ex.execute(
      f, set_of({Action::set_field(FieldId::kIpv4Dst, 0x0a000002),
                 Action::output(3)}));
  REQUIRE(out.size() == 1);
  CHECK(load_be32(out[0].frame.data() + 14 + 16) == 0x0a000002);
  CHECK(frame_ipv4_checksum_valid(out[0].frame));

  HeaderTuple t = parse(RawFrame{0, out[0].frame, 0});
  CHECK(t.ipv4_dst == 0x0a000002);
}

TEST_CASE("push then pop round trips byte-identically") {
  SUBCASE("vlan") {
    Bytes original = tcp_frame().data;
    Bytes work = original;
    REQUIRE(frame_edit::push_vlan(work, 0x8100));
    CHECK(work.size() == original.size() + 4);
    REQUIRE(frame_edit::pop_vlan(work));
    CHECK(work == original);
  }
  SUBCASE("mpls") {
    Bytes original = tcp_frame().data;
    Bytes work = original;
    REQUIRE(frame_edit::push_mpls(work, 0x8847));
    CHECK(load_be16(work.data() + 12) == 0x8847);
    REQUIRE(frame_edit::pop_mpls(work, 0x0800));
    CHECK(work == original);
  }
  SUBCASE("vlan on an already tagged frame copies the outer TCI") {
    FrameSpec spec;
    spec.vlan_tcis = {0xa064};
    spec.ipv4 = L3Spec{};
    Bytes original = build_frame(spec);
    Bytes work = original;
    REQUIRE(frame_edit::push_vlan(work, 0x8100));
    CHECK(load_be16(work.data() + 14) == 0xa064);  // copied TCI
    REQUIRE(frame_edit::pop_vlan(work));
    CHECK(work == original);
  }
}

TEST_CASE("set_field on an absent header is skipped and counted") {
  ActionExecutor ex(8);
  FrameSpec spec;
  spec.bare_ethertype = 0x86dd;
  RawFrame f{0, build_frame(spec), 0};
  Bytes before = f.data;
  auto out = ex.execute(
      f, set_of({Action::set_field(FieldId::kIpv4Dst, 1), Action::output(2)}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].frame == before);
  CHECK(ex.counters().skipped_actions.load() == 1);
}

TEST_CASE("modification correctness: only the mutated field changes") {
  ActionExecutor ex(8);
  struct Case {
    FieldId field;
    std::uint64_t value;
  };
  const Case cases[] = {
      {FieldId::kEthDst, 0x0102030405060ull & 0xffffffffffff},
      {FieldId::kEthSrc, 0x0a0b0c0d0e0f},
      {FieldId::kIpDscp, 17},
      {FieldId::kIpv4Src, 0xc0a80101},
      {FieldId::kIpv4Dst, 0xc0a80102},
      {FieldId::kTcpSrc, 4242},
      {FieldId::kTcpDst, 999},
  };
  for (const Case& c : cases) {
    CAPTURE(field_info(c.field).name);
    RawFrame f = tcp_frame();
    HeaderTuple before = parse(f);
    auto out = ex.execute(
        f, set_of({Action::set_field(c.field, c.value), Action::output(1)}));
    REQUIRE(out.size() == 1);
    HeaderTuple after = parse(RawFrame{0, out[0].frame, 0});
    CHECK(frame_ipv4_checksum_valid(out[0].frame));

    HeaderTuple expect = before;
    switch (c.field) {
      case FieldId::kEthDst: expect.eth_dst = c.value; break;
      case FieldId::kEthSrc: expect.eth_src = c.value; break;
      case FieldId::kIpDscp:
        expect.ip_dscp = static_cast<std::uint8_t>(c.value);
        break;
      case FieldId::kIpv4Src:
        expect.ipv4_src = static_cast<std::uint32_t>(c.value);
        break;
      case FieldId::kIpv4Dst:
        expect.ipv4_dst = static_cast<std::uint32_t>(c.value);
        break;
      case FieldId::kTcpSrc:
        expect.l4_src = static_cast<std::uint16_t>(c.value);
        break;
      case FieldId::kTcpDst:
        expect.l4_dst = static_cast<std::uint16_t>(c.value);
        break;
      default: break;
    }
    CHECK(after == expect);
  }
}

TEST_CASE("empty action set drops and counts") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  auto out = ex.execute(f, ActionSet{});
  CHECK(out.empty());
  CHECK(ex.counters().dropped_empty.load() == 1);
}

TEST_CASE("output ALL floods every port except ingress") {
  ActionExecutor ex(4);
  RawFrame f = tcp_frame(2);
  auto out = ex.execute(f, set_of({Action::output(kPortAll)}));
  REQUIRE(out.size() == 3);
  for (const auto& e : out) CHECK(e.port != 2);
}

TEST_CASE("action list semantics emit the frame as it stands") {
  ActionExecutor ex(8);
  RawFrame f = tcp_frame();
  std::vector<Action> list = {
      Action::output(1),
      Action::set_field(FieldId::kIpv4Dst, 0x01020304),
      Action::output(2),
  };
  auto out = ex.execute_list(f, list);
  REQUIRE(out.size() == 2);
  CHECK(out[0].frame == f.data);  // before the modification
  CHECK(load_be32(out[1].frame.data() + 14 + 16) == 0x01020304);
}

TEST_CASE("packet buffer") {
  SUBCASE("capacity enforcement") {
    PacketBuffer pb(2);
    CHECK(pb.buffer(tcp_frame(), 0, 0).has_value());
    CHECK(pb.buffer(tcp_frame(), 0, 0).has_value());
    CHECK_FALSE(pb.buffer(tcp_frame(), 0, 0).has_value());
    CHECK(pb.live() == 2);
  }

  SUBCASE("buffer then release round-trips the octets") {
    PacketBuffer pb(4);
    RawFrame f = tcp_frame(3);
    Bytes original = f.data;
    auto id = pb.buffer(std::move(f), 2, 77);
    REQUIRE(id.has_value());
    auto released = pb.release(*id);
    REQUIRE(released.has_value());
    CHECK(released->frame.data == original);
    CHECK(released->miss_table == 2);
    CHECK(released->frame.ingress_port == 3);
    CHECK_FALSE(pb.release(*id).has_value());  // slot freed
  }

  SUBCASE("random interleaving matches a shadow map") {
    std::mt19937_64 rng(21);
    PacketBuffer pb(64);
    std::map<std::uint32_t, std::size_t> shadow;  // id -> frame size
    for (int i = 0; i < 1000; ++i) {
      if (shadow.empty() || (rng() % 2 && shadow.size() < 64)) {
        FrameSpec spec;
        spec.ipv4 = L3Spec{};
        spec.payload = rng() % 64 + 1;
        Bytes data = build_frame(spec);
        std::size_t size = data.size();
        auto id = pb.buffer(RawFrame{0, std::move(data), 0}, 0, 0);
        REQUIRE(id.has_value());
        CHECK(shadow.count(*id) == 0);  // ids unique among live slots
        shadow[*id] = size;
      } else {
        auto it = shadow.begin();
        std::advance(it, rng() % shadow.size());
        auto released = pb.release(it->first);
        REQUIRE(released.has_value());
        CHECK(released->frame.data.size() == it->second);
        shadow.erase(it);
      }
    }
    CHECK(pb.live() == shadow.size());
  }

  SUBCASE("expiry drops stale slots") {
    PacketBuffer pb(4);
    pb.buffer(tcp_frame(), 0, 1000);
    pb.buffer(tcp_frame(), 0, 5000);
    CHECK(pb.expire(6001, 5000) == 1);  // the first is 5001ns old
    CHECK(pb.live() == 1);
  }
}
