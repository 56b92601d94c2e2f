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

#include "flowfabric/ofp_codec.hpp"

#include <doctest.h>

#include "support/message_corpus.hpp"

using namespace flowfabric;
using namespace flowfabric::ofp;
using flowfabric::testsupport::MessageCorpus;

namespace {

OfpMessage decode_ok(BytesView bytes) {
  auto result = decode(bytes);
  REQUIRE(std::holds_alternative<OfpMessage>(result));
  return std::get<OfpMessage>(result);
}

DecodeError decode_err(BytesView bytes) {
  auto result = decode(bytes);
  REQUIRE(std::holds_alternative<DecodeError>(result));
  return std::get<DecodeError>(result);
}

}  // namespace

TEST_CASE("hello wire bytes") {
  // 04 00 00 08 00 00 00 2a: version 4, type 0, length 8, xid 42.
  Bytes wire = from_hex("04 00 00 08 00 00 00 2a");
  OfpMessage msg = decode_ok(wire);
  CHECK(msg.xid == 42);
  CHECK(std::holds_alternative<Hello>(msg.body));
  CHECK(encode(msg) == wire);

  CHECK(encode(make_message(0, Hello{})) == from_hex("04 00 00 08 00 00 00 00"));
}

TEST_CASE("echo request carries its payload verbatim") {
  Bytes wire = from_hex("04 02 00 10 00 00 00 07 0102030405060708");
  OfpMessage msg = decode_ok(wire);
  const auto& echo = std::get<EchoRequest>(msg.body);
  CHECK(echo.payload == from_hex("0102030405060708"));
  CHECK(encode(msg) == wire);
}

TEST_CASE("flow-mod against an independently hand-laid reference encoding") {
  // ADD, table 0, priority 100, match {in_port=1}, write-actions [output:2].
  Bytes wire = from_hex(
      "04 0e 00 58 00 00 00 11"
      "00 00 00 00 00 00 00 00"   // cookie
      "00 00 00 00 00 00 00 00"   // cookie_mask
      "00 00"                      // table, command
      "00 00 00 00"               // idle, hard
      "00 64"                      // priority
      "ff ff ff ff"               // buffer_id
      "ff ff ff ff"               // out_port
      "ff ff ff ff"               // out_group
      "00 00 00 00"               // flags + pad
      "00 01 00 0c 80 00 00 04 00 00 00 01 00 00 00 00"  // match, padded
      "00 03 00 18 00 00 00 00"   // write-actions instruction
      "00 00 00 10 00 00 00 02 ff ff 00 00 00 00 00 00");  // output:2
  REQUIRE(wire.size() == 0x58);

  OfpMessage msg = decode_ok(wire);
  CHECK(msg.xid == 0x11);
  const auto& fm = std::get<FlowModMsg>(msg.body);
  CHECK(fm.command == OFPFC_ADD);
  CHECK(fm.table_id == 0);
  CHECK(fm.priority == 100);
  CHECK(fm.buffer_id == kNoBuffer);
  REQUIRE(fm.match.fields.size() == 1);
  CHECK(fm.match.fields[0].field == FieldId::kInPort);
  CHECK(load_be32(fm.match.fields[0].value.data()) == 1);
  REQUIRE(fm.instructions.size() == 1);
  const auto& wa = std::get<WriteActionsInstr>(fm.instructions[0]);
  REQUIRE(wa.actions.size() == 1);
  CHECK(wa.actions[0].kind == Action::Kind::kOutput);
  CHECK(wa.actions[0].port == 2);

  CHECK(encode(msg) == wire);
}

TEST_CASE("switch_config accepts both the 12-byte and padded 16-byte forms") {
  Bytes standard = from_hex("04 09 00 0c 00 00 00 05 00 00 00 80");
  OfpMessage msg = decode_ok(standard);
  const auto& sc = std::get<SetConfig>(msg.body);
  CHECK(sc.miss_send_len == 128);
  CHECK_FALSE(sc.padded);
  CHECK(encode(msg) == standard);  // bit-exact round trip of the 12-byte form

  OfpMessage ours = make_message(5, GetConfigReply{0, 128});
  Bytes wire = encode(ours);
  CHECK(wire.size() == 16);
  CHECK(wire.size() % 8 == 0);
  CHECK(decode_ok(wire) == ours);
}

TEST_CASE("decode framing errors") {
  SUBCASE("length below the header size is connection-fatal") {
    Bytes bad = from_hex("04 00 00 04 00 00 00 00");
    auto err = decode_err(bad);
    CHECK(err.connection_fatal);
  }
  SUBCASE("body shorter than the structure is connection-fatal") {
    // features_reply claims 16 bytes but the structure needs 32.
    Bytes bad = from_hex("04 06 00 10 00 00 00 01 0000000000000001");
    auto err = decode_err(bad);
    CHECK(err.connection_fatal);
  }
  SUBCASE("unknown OXM field is message-fatal only") {
    // flow_mod with OXM field 63 (out of range).
    Bytes bad = from_hex(
        "04 0e 00 40 00 00 00 01"
        "00 00 00 00 00 00 00 00"
        "00 00 00 00 00 00 00 00"
        "00 00 00 00 00 00 00 00"
        "ff ff ff ff ff ff ff ff"
        "ff ff ff ff 00 00 00 00"
        "00 01 00 0c 80 00 7e 04 00 00 00 01 00 00 00 00");
    auto err = decode_err(bad);
    CHECK_FALSE(err.connection_fatal);
    CHECK(err.err_type == OFPET_BAD_MATCH);
    CHECK(err.err_code == OFPBMC_BAD_FIELD);
  }
}

TEST_CASE("unknown message types round-trip as Unsupported") {
  Bytes wire = from_hex("04 63 00 10 00 00 00 09 0011223344556677");
  OfpMessage msg = decode_ok(wire);
  const auto& u = std::get<Unsupported>(msg.body);
  CHECK(u.wire_type == 0x63);
  CHECK(u.body.size() == 8);
  CHECK(encode(msg) == wire);
}

TEST_CASE("round trip over a generated corpus") {
  MessageCorpus corpus(2024);
  auto messages = corpus.generate(150);
  for (const auto& m : messages) {
    CAPTURE(describe(m));
    Bytes wire = encode(m);
    CHECK(wire.size() % 8 == 0);
    CHECK(load_be16(wire.data() + 2) == wire.size());
    OfpMessage back = decode_ok(wire);
    CHECK(back == m);
    CHECK(encode(back) == wire);
  }
}

TEST_CASE("match_to_key validation") {
  auto oxm = [](FieldId id, std::uint64_t value,
                std::optional<std::uint64_t> mask =
                    std::nullopt) -> OxmField {
    const FieldInfo& info = field_info(id);
    OxmField f;
    f.field = id;
    f.value.resize(info.width);
    for (std::size_t i = 0; i < info.width; ++i) {
      f.value[info.width - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
    }
    if (mask) {
      Bytes mb(info.width);
      for (std::size_t i = 0; i < info.width; ++i) {
        mb[info.width - 1 - i] = static_cast<std::uint8_t>(*mask >> (8 * i));
      }
      f.mask = std::move(mb);
    }
    return f;
  };

  SUBCASE("valid masked ipv4 match builds a canonical key") {
    Match m;
    m.fields.push_back(oxm(FieldId::kEthType, kEthTypeIpv4));
    m.fields.push_back(oxm(FieldId::kIpv4Dst, 0x0a000000, 0xffffff00ull));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<MaskedKey>(key));
    const MaskedKey& k = std::get<MaskedKey>(key);
    CHECK(k.canonical());
    auto [value, mask] = read_field(k, FieldId::kIpv4Dst);
    CHECK(value == 0x0a000000);
    CHECK(mask == 0xffffff00);
  }

  SUBCASE("duplicate field") {
    Match m;
    m.fields.push_back(oxm(FieldId::kInPort, 1));
    m.fields.push_back(oxm(FieldId::kInPort, 2));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<FlowModError>(key));
    CHECK(std::get<FlowModError>(key).err_code == OFPBMC_DUP_FIELD);
  }

  SUBCASE("missing prerequisite") {
    Match m;
    m.fields.push_back(oxm(FieldId::kTcpSrc, 80));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<FlowModError>(key));
    CHECK(std::get<FlowModError>(key).err_code == OFPBMC_BAD_PREREQ);

    Match m2;
    m2.fields.push_back(oxm(FieldId::kEthType, kEthTypeIpv4));
    m2.fields.push_back(oxm(FieldId::kIpProto, kIpProtoUdp));
    m2.fields.push_back(oxm(FieldId::kTcpSrc, 80));  // UDP proto, TCP field
    auto key2 = match_to_key(m2);
    REQUIRE(std::holds_alternative<FlowModError>(key2));
    CHECK(std::get<FlowModError>(key2).err_code == OFPBMC_BAD_PREREQ);
  }

  SUBCASE("value out of range") {
    Match m;
    m.fields.push_back(oxm(FieldId::kVlanVid, 0x2001));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<FlowModError>(key));
    CHECK(std::get<FlowModError>(key).err_code == OFPBMC_BAD_VALUE);
  }

  SUBCASE("mask on a non-maskable field") {
    Match m;
    m.fields.push_back(oxm(FieldId::kEthType, kEthTypeIpv4, 0xff00ull));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<FlowModError>(key));
    CHECK(std::get<FlowModError>(key).err_code == OFPBMC_BAD_MASK);
  }

  SUBCASE("value bits outside the mask") {
    Match m;
    m.fields.push_back(oxm(FieldId::kEthType, kEthTypeIpv4));
    OxmField f = oxm(FieldId::kIpv4Src, 0x0a0000ff);
    f.mask = Bytes{0xff, 0xff, 0xff, 0x00};
    m.fields.push_back(std::move(f));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<FlowModError>(key));
    CHECK(std::get<FlowModError>(key).err_code == OFPBMC_BAD_WILDCARDS);
  }

  SUBCASE("vlan any-tagged idiom") {
    Match m;
    m.fields.push_back(
        oxm(FieldId::kVlanVid, kVlanPresentBit, kVlanPresentBit));
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<MaskedKey>(key));
    HeaderTuple tagged;
    tagged.vlan_vid = 7;
    tagged.vlan_pcp = 0;
    HeaderTuple untagged;
    CHECK(std::get<MaskedKey>(key).matches(serialize_tuple(tagged)));
    CHECK_FALSE(std::get<MaskedKey>(key).matches(serialize_tuple(untagged)));
  }
}

TEST_CASE("key_to_match reconstructs the canonical OXM list") {
  MessageCorpus corpus(77);
  for (int i = 0; i < 200; ++i) {
    Match m = corpus.random_match();
    auto key = match_to_key(m);
    REQUIRE(std::holds_alternative<MaskedKey>(key));
    Match back = key_to_match(std::get<MaskedKey>(key));
    auto key2 = match_to_key(back);
    REQUIRE(std::holds_alternative<MaskedKey>(key2));
    // The canonical form may reorder fields but must denote the same key.
    CHECK(std::get<MaskedKey>(key2) == std::get<MaskedKey>(key));
  }
}

TEST_CASE("lower_instructions rejects apply-actions") {
  std::vector<Instruction> instrs;
  instrs.push_back(ApplyActionsInstr{{Action::output(1)}});
  auto r = lower_instructions(instrs);
  REQUIRE(std::holds_alternative<FlowModError>(r));
  CHECK(std::get<FlowModError>(r).err_type == OFPET_BAD_INSTRUCTION);
  CHECK(std::get<FlowModError>(r).err_code == OFPBIC_UNSUP_INST);
}

TEST_CASE("validate_actions") {
  SUBCASE("output to a nonexistent port") {
    std::vector<Action> actions = {Action::output(12)};
    auto err = validate_actions(actions, 8);
    REQUIRE(err.has_value());
    CHECK(err->err_code == OFPBAC_BAD_OUT_PORT);
  }
  SUBCASE("controller and ALL pseudo-ports are fine") {
    std::vector<Action> actions = {Action::output(kPortController),
                                   Action::output(kPortAll)};
    CHECK_FALSE(validate_actions(actions, 8).has_value());
  }
  SUBCASE("set_field on eth_type is rejected") {
    std::vector<Action> actions = {Action::set_field(FieldId::kEthType, 5)};
    auto err = validate_actions(actions, 8);
    REQUIRE(err.has_value());
    CHECK(err->err_code == OFPBAC_BAD_SET_TYPE);
  }
  SUBCASE("set_field value out of range") {
    std::vector<Action> actions = {Action::set_field(FieldId::kVlanPcp, 9)};
    auto err = validate_actions(actions, 8);
    REQUIRE(err.has_value());
    CHECK(err->err_code == OFPBAC_BAD_SET_ARGUMENT);
  }
}
