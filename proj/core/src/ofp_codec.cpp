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

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flowfabric::ofp {

namespace {

// Decode failures propagate as exceptions inside this file and are folded
// into a DecodeError at the decode() boundary.
struct DecodeFailure {
  DecodeError error;
};

[[noreturn]] void fail(bool fatal, std::uint16_t type, std::uint16_t code,
                       std::string detail) {
  throw DecodeFailure{{fatal, type, code, std::move(detail)}};
}

// ---------------------------------------------------------------------------
// OXM match
// ---------------------------------------------------------------------------

void encode_oxm(BytesWriter& w, const OxmField& f) {
  const FieldInfo& info = field_info(f.field);
  const bool hasmask = f.mask.has_value();
  const std::size_t payload = info.width * (hasmask ? 2 : 1);
  w.u16(kOxmClassOpenflowBasic);
  w.u8(static_cast<std::uint8_t>(info.oxm_field << 1 | (hasmask ? 1 : 0)));
  w.u8(static_cast<std::uint8_t>(payload));
  w.bytes(f.value);
  if (hasmask) w.bytes(*f.mask);
}

// ofp_match: type, length (excluding pad), OXM TLVs, zero pad to 8.
void encode_match(BytesWriter& w, const Match& m) {
  const std::size_t start = w.size();
  w.u16(kMatchTypeOxm);
  w.u16(0);  // patched below
  for (const OxmField& f : m.fields) encode_oxm(w, f);
  const std::size_t match_len = w.size() - start;
  w.patch_u16(start + 2, static_cast<std::uint16_t>(match_len));
  w.pad((8 - match_len % 8) % 8);
}

Match decode_match(BytesReader& r) {
  const std::size_t start = r.pos();
  std::uint16_t type = r.u16();
  std::uint16_t length = r.u16();
  if (type != kMatchTypeOxm) {
    fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_TYPE, "match type not OXM");
  }
  if (length < 4) {
    fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_LEN, "match length < 4");
  }
  Match m;
  std::size_t oxm_end = start + length;
  while (r.pos() < oxm_end) {
    std::uint16_t oxm_class = r.u16();
    std::uint8_t field_hm = r.u8();
    std::uint8_t payload_len = r.u8();
    if (oxm_class != kOxmClassOpenflowBasic) {
      fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_FIELD, "unsupported OXM class");
    }
    const FieldInfo* info = field_by_oxm(field_hm >> 1);
    if (info == nullptr) {
      fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_FIELD, "unknown OXM field");
    }
    const bool hasmask = field_hm & 1;
    const std::size_t expect = info->width * (hasmask ? 2 : 1);
    if (payload_len != expect) {
      fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_LEN, "bad OXM payload length");
    }
    OxmField f;
    f.field = info->id;
    auto v = r.bytes(info->width);
    f.value.assign(v.begin(), v.end());
    if (hasmask) {
      auto mk = r.bytes(info->width);
      f.mask = Bytes(mk.begin(), mk.end());
    }
    m.fields.push_back(std::move(f));
  }
  if (r.pos() != oxm_end) {
    fail(false, OFPET_BAD_MATCH, OFPBMC_BAD_LEN, "OXM overruns match length");
  }
  r.skip((8 - length % 8) % 8);
  return m;
}

// ---------------------------------------------------------------------------
// Actions
// ---------------------------------------------------------------------------

void encode_action(BytesWriter& w, const Action& a) {
  switch (a.kind) {
    case Action::Kind::kOutput:
      w.u16(OFPAT_OUTPUT);
      w.u16(16);
      w.u32(a.port);
      w.u16(a.max_len);
      w.pad(6);
      break;
    case Action::Kind::kPushVlan:
    case Action::Kind::kPushMpls:
      w.u16(a.kind == Action::Kind::kPushVlan ? OFPAT_PUSH_VLAN
                                              : OFPAT_PUSH_MPLS);
      w.u16(8);
      w.u16(a.ethertype);
      w.pad(2);
      break;
    case Action::Kind::kPopMpls:
      w.u16(OFPAT_POP_MPLS);
      w.u16(8);
      w.u16(a.ethertype);
      w.pad(2);
      break;
    case Action::Kind::kPopVlan:
      w.u16(OFPAT_POP_VLAN);
      w.u16(8);
      w.pad(4);
      break;
    case Action::Kind::kDecNwTtl:
      w.u16(OFPAT_DEC_NW_TTL);
      w.u16(8);
      w.pad(4);
      break;
    case Action::Kind::kSetNwTtl:
      w.u16(OFPAT_SET_NW_TTL);
      w.u16(8);
      w.u8(a.ttl);
      w.pad(3);
      break;
    case Action::Kind::kSetField: {
      const FieldInfo& info = field_info(a.field);
      const std::size_t oxm = 4 + info.width;
      const std::size_t total = (4 + oxm + 7) / 8 * 8;  // len includes pad
      w.u16(OFPAT_SET_FIELD);
      w.u16(static_cast<std::uint16_t>(total));
      w.u16(kOxmClassOpenflowBasic);
      w.u8(static_cast<std::uint8_t>(info.oxm_field << 1));
      w.u8(static_cast<std::uint8_t>(info.width));
      w.bytes(a.set_value);
      w.pad(total - 4 - oxm);
      break;
    }
    case Action::Kind::kUnsupported:
      w.u16(a.raw_type);
      w.u16(static_cast<std::uint16_t>(4 + a.raw_body.size()));
      w.bytes(a.raw_body);
      break;
  }
}

Action decode_action(BytesReader& r) {
  std::uint16_t type = r.u16();
  std::uint16_t len = r.u16();
  if (len < 4 || len % 8 != 0) {
    fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "bad action length");
  }
  switch (type) {
    case OFPAT_OUTPUT: {
      if (len != 16) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "output len != 16");
      }
      std::uint32_t port = r.u32();
      std::uint16_t max_len = r.u16();
      r.skip(6);
      return Action::output(port, max_len);
    }
    case OFPAT_PUSH_VLAN:
    case OFPAT_PUSH_MPLS:
    case OFPAT_POP_MPLS: {
      if (len != 8) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "tag action len != 8");
      }
      std::uint16_t ethertype = r.u16();
      r.skip(2);
      if (type == OFPAT_PUSH_VLAN) return Action::push_vlan(ethertype);
      if (type == OFPAT_PUSH_MPLS) return Action::push_mpls(ethertype);
      return Action::pop_mpls(ethertype);
    }
    case OFPAT_POP_VLAN:
    case OFPAT_DEC_NW_TTL:
      if (len != 8) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "action len != 8");
      }
      r.skip(4);
      return type == OFPAT_POP_VLAN ? Action::pop_vlan()
                                    : Action::dec_nw_ttl();
    case OFPAT_SET_NW_TTL: {
      if (len != 8) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "set_nw_ttl len != 8");
      }
      std::uint8_t ttl = r.u8();
      r.skip(3);
      return Action::set_nw_ttl(ttl);
    }
    case OFPAT_SET_FIELD: {
      std::uint16_t oxm_class = r.u16();
      std::uint8_t field_hm = r.u8();
      std::uint8_t payload_len = r.u8();
      if (oxm_class != kOxmClassOpenflowBasic || (field_hm & 1)) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_SET_TYPE,
             "set_field OXM class/mask unsupported");
      }
      const FieldInfo* info = field_by_oxm(field_hm >> 1);
      if (info == nullptr) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_SET_TYPE,
             "set_field unknown field");
      }
      if (payload_len != info->width || len != (8 + info->width + 7) / 8 * 8) {
        fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_SET_LEN,
             "set_field length mismatch");
      }
      auto v = r.bytes(info->width);
      r.skip(len - 8 - info->width);
      return Action::set_field_bytes(info->id, Bytes(v.begin(), v.end()));
    }
    default: {
      Action a;
      a.kind = Action::Kind::kUnsupported;
      a.raw_type = type;
      auto body = r.bytes(len - 4);
      a.raw_body.assign(body.begin(), body.end());
      return a;
    }
  }
}

std::vector<Action> decode_actions(BytesReader& r, std::size_t bytes) {
  std::vector<Action> out;
  const std::size_t end = r.pos() + bytes;
  while (r.pos() < end) out.push_back(decode_action(r));
  if (r.pos() != end) {
    fail(false, OFPET_BAD_ACTION, OFPBAC_BAD_LEN, "action list overrun");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instructions
// ---------------------------------------------------------------------------

void encode_instruction(BytesWriter& w, const Instruction& instr) {
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, GotoTableInstr>) {
          w.u16(OFPIT_GOTO_TABLE);
          w.u16(8);
          w.u8(i.table_id);
          w.pad(3);
        } else if constexpr (std::is_same_v<T, WriteActionsInstr> ||
                             std::is_same_v<T, ApplyActionsInstr>) {
          const std::size_t start = w.size();
          w.u16(std::is_same_v<T, WriteActionsInstr> ? OFPIT_WRITE_ACTIONS
                                                     : OFPIT_APPLY_ACTIONS);
          w.u16(0);
          w.pad(4);
          for (const Action& a : i.actions) encode_action(w, a);
          w.patch_u16(start + 2, static_cast<std::uint16_t>(w.size() - start));
        } else if constexpr (std::is_same_v<T, ClearActionsInstr>) {
          w.u16(OFPIT_CLEAR_ACTIONS);
          w.u16(8);
          w.pad(4);
        } else {  // UnsupportedInstr
          w.u16(i.type);
          w.u16(static_cast<std::uint16_t>(4 + i.body.size()));
          w.bytes(i.body);
        }
      },
      instr);
}

std::vector<Instruction> decode_instructions(BytesReader& r) {
  std::vector<Instruction> out;
  while (!r.empty()) {
    std::uint16_t type = r.u16();
    std::uint16_t len = r.u16();
    if (len < 4) {
      fail(false, OFPET_BAD_INSTRUCTION, OFPBIC_BAD_LEN,
           "instruction length < 4");
    }
    switch (type) {
      case OFPIT_GOTO_TABLE: {
        if (len != 8) {
          fail(false, OFPET_BAD_INSTRUCTION, OFPBIC_BAD_LEN, "goto len != 8");
        }
        std::uint8_t table = r.u8();
        r.skip(3);
        out.push_back(GotoTableInstr{table});
        break;
      }
      case OFPIT_WRITE_ACTIONS:
      case OFPIT_APPLY_ACTIONS: {
        r.skip(4);
        auto actions = decode_actions(r, len - 8);
        if (type == OFPIT_WRITE_ACTIONS) {
          out.push_back(WriteActionsInstr{std::move(actions)});
        } else {
          out.push_back(ApplyActionsInstr{std::move(actions)});
        }
        break;
      }
      case OFPIT_CLEAR_ACTIONS:
        if (len != 8) {
          fail(false, OFPET_BAD_INSTRUCTION, OFPBIC_BAD_LEN,
               "clear len != 8");
        }
        r.skip(4);
        out.push_back(ClearActionsInstr{});
        break;
      default: {
        auto body = r.bytes(len - 4);
        out.push_back(UnsupportedInstr{type, Bytes(body.begin(), body.end())});
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-size ASCII field (ofp_desc)
// ---------------------------------------------------------------------------

void encode_fixed_string(BytesWriter& w, const std::string& s,
                         std::size_t width) {
  std::size_t n = std::min(s.size(), width - 1);  // keep a terminating NUL
  w.bytes(BytesView(reinterpret_cast<const std::uint8_t*>(s.data()), n));
  w.pad(width - n);
}

std::string decode_fixed_string(BytesReader& r, std::size_t width) {
  auto raw = r.bytes(width);
  std::size_t n = 0;
  while (n < width && raw[n] != 0) ++n;
  return std::string(reinterpret_cast<const char*>(raw.data()), n);
}

}  // namespace

// ---------------------------------------------------------------------------
// encode
// ---------------------------------------------------------------------------

std::uint8_t wire_type(const MessageBody& body) {
  struct Visitor {
    std::uint8_t operator()(const Hello&) { return OFPT_HELLO; }
    std::uint8_t operator()(const ErrorMsg&) { return OFPT_ERROR; }
    std::uint8_t operator()(const EchoRequest&) { return OFPT_ECHO_REQUEST; }
    std::uint8_t operator()(const EchoReply&) { return OFPT_ECHO_REPLY; }
    std::uint8_t operator()(const FeaturesRequest&) {
      return OFPT_FEATURES_REQUEST;
    }
    std::uint8_t operator()(const FeaturesReply&) {
      return OFPT_FEATURES_REPLY;
    }
    std::uint8_t operator()(const GetConfigRequest&) {
      return OFPT_GET_CONFIG_REQUEST;
    }
    std::uint8_t operator()(const GetConfigReply&) {
      return OFPT_GET_CONFIG_REPLY;
    }
    std::uint8_t operator()(const SetConfig&) { return OFPT_SET_CONFIG; }
    std::uint8_t operator()(const PacketIn&) { return OFPT_PACKET_IN; }
    std::uint8_t operator()(const FlowRemoved&) { return OFPT_FLOW_REMOVED; }
    std::uint8_t operator()(const PacketOut&) { return OFPT_PACKET_OUT; }
    std::uint8_t operator()(const FlowModMsg&) { return OFPT_FLOW_MOD; }
    std::uint8_t operator()(const TableModMsg&) { return OFPT_TABLE_MOD; }
    std::uint8_t operator()(const MultipartRequest&) {
      return OFPT_MULTIPART_REQUEST;
    }
    std::uint8_t operator()(const MultipartReply&) {
      return OFPT_MULTIPART_REPLY;
    }
    std::uint8_t operator()(const BarrierRequest&) {
      return OFPT_BARRIER_REQUEST;
    }
    std::uint8_t operator()(const BarrierReply&) { return OFPT_BARRIER_REPLY; }
    std::uint8_t operator()(const Unsupported& u) { return u.wire_type; }
  };
  return std::visit(Visitor{}, body);
}

Bytes encode(const OfpMessage& msg) {
  BytesWriter w;
  w.u8(kVersion);
  w.u8(wire_type(msg.body));
  w.u16(0);  // length, patched at the end
  w.u32(msg.xid);

  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Hello>) {
          w.bytes(b.elements);
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          w.u16(b.err_type);
          w.u16(b.err_code);
          w.bytes(b.data);
        } else if constexpr (std::is_same_v<T, EchoRequest> ||
                             std::is_same_v<T, EchoReply>) {
          w.bytes(b.payload);
        } else if constexpr (std::is_same_v<T, FeaturesRequest> ||
                             std::is_same_v<T, GetConfigRequest> ||
                             std::is_same_v<T, BarrierRequest> ||
                             std::is_same_v<T, BarrierReply>) {
          // header only
        } else if constexpr (std::is_same_v<T, FeaturesReply>) {
          w.u64(b.datapath_id);
          w.u32(b.n_buffers);
          w.u8(b.n_tables);
          w.u8(b.auxiliary_id);
          w.pad(2);
          w.u32(b.capabilities);
          w.u32(b.reserved);
        } else if constexpr (std::is_same_v<T, GetConfigReply> ||
                             std::is_same_v<T, SetConfig>) {
          w.u16(b.flags);
          w.u16(b.miss_send_len);
          if (b.padded) w.pad(4);
        } else if constexpr (std::is_same_v<T, PacketIn>) {
          w.u32(b.buffer_id);
          w.u16(b.total_len);
          w.u8(b.reason);
          w.u8(b.table_id);
          w.u64(b.cookie);
          encode_match(w, b.match);
          w.pad(2);
          w.bytes(b.payload);
        } else if constexpr (std::is_same_v<T, FlowRemoved>) {
          w.u64(b.cookie);
          w.u16(b.priority);
          w.u8(b.reason);
          w.u8(b.table_id);
          w.u32(b.duration_sec);
          w.u32(b.duration_nsec);
          w.u16(b.idle_timeout);
          w.u16(b.hard_timeout);
          w.u64(b.packet_count);
          w.u64(b.byte_count);
          encode_match(w, b.match);
        } else if constexpr (std::is_same_v<T, PacketOut>) {
          w.u32(b.buffer_id);
          w.u32(b.in_port);
          const std::size_t len_at = w.size();
          w.u16(0);
          w.pad(6);
          const std::size_t actions_start = w.size();
          for (const Action& a : b.actions) encode_action(w, a);
          w.patch_u16(len_at,
                      static_cast<std::uint16_t>(w.size() - actions_start));
          w.bytes(b.payload);
        } else if constexpr (std::is_same_v<T, FlowModMsg>) {
          w.u64(b.cookie);
          w.u64(b.cookie_mask);
          w.u8(b.table_id);
          w.u8(b.command);
          w.u16(b.idle_timeout);
          w.u16(b.hard_timeout);
          w.u16(b.priority);
          w.u32(b.buffer_id);
          w.u32(b.out_port);
          w.u32(b.out_group);
          w.u16(b.flags);
          w.pad(2);
          encode_match(w, b.match);
          for (const Instruction& i : b.instructions) {
            encode_instruction(w, i);
          }
        } else if constexpr (std::is_same_v<T, TableModMsg>) {
          w.u8(b.table_id);
          w.pad(3);
          w.u32(b.config);
        } else if constexpr (std::is_same_v<T, MultipartRequest>) {
          w.u16(b.mp_type);
          w.u16(b.flags);
          w.pad(4);
          std::visit(
              [&](const auto& mb) {
                using M = std::decay_t<decltype(mb)>;
                if constexpr (std::is_same_v<M, FlowStatsRequestBody>) {
                  w.u8(mb.table_id);
                  w.pad(3);
                  w.u32(mb.out_port);
                  w.u32(mb.out_group);
                  w.pad(4);
                  w.u64(mb.cookie);
                  w.u64(mb.cookie_mask);
                  encode_match(w, mb.match);
                } else if constexpr (std::is_same_v<M, PortStatsRequestBody>) {
                  w.u32(mb.port_no);
                  w.pad(4);
                } else if constexpr (std::is_same_v<M,
                                                    QueueStatsRequestBody>) {
                  w.u32(mb.port_no);
                  w.u32(mb.queue_id);
                } else if constexpr (std::is_same_v<M, RawMultipartBody>) {
                  w.bytes(mb.body);
                }
                // DescRequest / TableStatsRequestBody: empty body
              },
              b.body);
        } else if constexpr (std::is_same_v<T, MultipartReply>) {
          w.u16(b.mp_type);
          w.u16(b.flags);
          w.pad(4);
          std::visit(
              [&](const auto& mb) {
                using M = std::decay_t<decltype(mb)>;
                if constexpr (std::is_same_v<M, DescReply>) {
                  encode_fixed_string(w, mb.mfr_desc, 256);
                  encode_fixed_string(w, mb.hw_desc, 256);
                  encode_fixed_string(w, mb.sw_desc, 256);
                  encode_fixed_string(w, mb.serial_num, 32);
                  encode_fixed_string(w, mb.dp_desc, 256);
                } else if constexpr (std::is_same_v<
                                         M, std::vector<FlowStatsEntry>>) {
                  for (const FlowStatsEntry& e : mb) {
                    const std::size_t start = w.size();
                    w.u16(0);  // entry length, patched
                    w.u8(e.table_id);
                    w.pad(1);
                    w.u32(e.duration_sec);
                    w.u32(e.duration_nsec);
                    w.u16(e.priority);
                    w.u16(e.idle_timeout);
                    w.u16(e.hard_timeout);
                    w.u16(e.flags);
                    w.pad(4);
                    w.u64(e.cookie);
                    w.u64(e.packet_count);
                    w.u64(e.byte_count);
                    encode_match(w, e.match);
                    for (const Instruction& i : e.instructions) {
                      encode_instruction(w, i);
                    }
                    w.patch_u16(start,
                                static_cast<std::uint16_t>(w.size() - start));
                  }
                } else if constexpr (std::is_same_v<
                                         M, std::vector<TableStatsEntry>>) {
                  for (const TableStatsEntry& e : mb) {
                    w.u8(e.table_id);
                    w.pad(3);
                    w.u32(e.active_count);
                    w.u64(e.lookup_count);
                    w.u64(e.matched_count);
                  }
                } else if constexpr (std::is_same_v<
                                         M, std::vector<PortStatsEntry>>) {
                  for (const PortStatsEntry& e : mb) {
                    w.u32(e.port_no);
                    w.pad(4);
                    w.u64(e.rx_packets);
                    w.u64(e.tx_packets);
                    w.u64(e.rx_bytes);
                    w.u64(e.tx_bytes);
                    w.u64(e.rx_dropped);
                    w.u64(e.tx_dropped);
                    w.u64(e.rx_errors);
                    w.u64(e.tx_errors);
                    w.u64(e.rx_frame_err);
                    w.u64(e.rx_over_err);
                    w.u64(e.rx_crc_err);
                    w.u64(e.collisions);
                    w.u32(e.duration_sec);
                    w.u32(e.duration_nsec);
                  }
                } else if constexpr (std::is_same_v<
                                         M, std::vector<QueueStatsEntry>>) {
                  for (const QueueStatsEntry& e : mb) {
                    w.u32(e.port_no);
                    w.u32(e.queue_id);
                    w.u64(e.tx_bytes);
                    w.u64(e.tx_packets);
                    w.u64(e.tx_errors);
                    w.u32(e.duration_sec);
                    w.u32(e.duration_nsec);
                  }
                } else if constexpr (std::is_same_v<M, RawMultipartBody>) {
                  w.bytes(mb.body);
                }
              },
              b.body);
        } else if constexpr (std::is_same_v<T, Unsupported>) {
          w.bytes(b.body);
        }
      },
      msg.body);

  if (w.size() > 0xffff) {
    throw std::length_error("OpenFlow message exceeds 16-bit length");
  }
  Bytes out = w.take();
  store_be16(out.data() + 2, static_cast<std::uint16_t>(out.size()));
  return out;
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

namespace {

MessageBody decode_body(std::uint8_t type, BytesReader& r) {
  switch (type) {
    case OFPT_HELLO: {
      auto rest = r.rest();
      return Hello{Bytes(rest.begin(), rest.end())};
    }
    case OFPT_ERROR: {
      ErrorMsg e;
      e.err_type = r.u16();
      e.err_code = r.u16();
      auto rest = r.rest();
      e.data.assign(rest.begin(), rest.end());
      return e;
    }
    case OFPT_ECHO_REQUEST: {
      auto rest = r.rest();
      return EchoRequest{Bytes(rest.begin(), rest.end())};
    }
    case OFPT_ECHO_REPLY: {
      auto rest = r.rest();
      return EchoReply{Bytes(rest.begin(), rest.end())};
    }
    case OFPT_FEATURES_REQUEST:
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "features_request body not empty");
      }
      return FeaturesRequest{};
    case OFPT_FEATURES_REPLY: {
      FeaturesReply f;
      f.datapath_id = r.u64();
      f.n_buffers = r.u32();
      f.n_tables = r.u8();
      f.auxiliary_id = r.u8();
      r.skip(2);
      f.capabilities = r.u32();
      f.reserved = r.u32();
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "features_reply trailing bytes");
      }
      return f;
    }
    case OFPT_GET_CONFIG_REQUEST:
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "get_config_request body not empty");
      }
      return GetConfigRequest{};
    case OFPT_GET_CONFIG_REPLY:
    case OFPT_SET_CONFIG: {
      std::uint16_t flags = r.u16();
      std::uint16_t msl = r.u16();
      bool padded = false;
      if (r.remaining() == 4) {
        r.skip(4);
        padded = true;
      } else if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "switch_config bad length");
      }
      if (type == OFPT_SET_CONFIG) return SetConfig{flags, msl, padded};
      return GetConfigReply{flags, msl, padded};
    }
    case OFPT_PACKET_IN: {
      PacketIn p;
      p.buffer_id = r.u32();
      p.total_len = r.u16();
      p.reason = r.u8();
      p.table_id = r.u8();
      p.cookie = r.u64();
      p.match = decode_match(r);
      r.skip(2);
      auto rest = r.rest();
      p.payload.assign(rest.begin(), rest.end());
      return p;
    }
    case OFPT_FLOW_REMOVED: {
      FlowRemoved f;
      f.cookie = r.u64();
      f.priority = r.u16();
      f.reason = r.u8();
      f.table_id = r.u8();
      f.duration_sec = r.u32();
      f.duration_nsec = r.u32();
      f.idle_timeout = r.u16();
      f.hard_timeout = r.u16();
      f.packet_count = r.u64();
      f.byte_count = r.u64();
      f.match = decode_match(r);
      return f;
    }
    case OFPT_PACKET_OUT: {
      PacketOut p;
      p.buffer_id = r.u32();
      p.in_port = r.u32();
      std::uint16_t actions_len = r.u16();
      r.skip(6);
      p.actions = decode_actions(r, actions_len);
      auto rest = r.rest();
      p.payload.assign(rest.begin(), rest.end());
      return p;
    }
    case OFPT_FLOW_MOD: {
      FlowModMsg f;
      f.cookie = r.u64();
      f.cookie_mask = r.u64();
      f.table_id = r.u8();
      f.command = r.u8();
      f.idle_timeout = r.u16();
      f.hard_timeout = r.u16();
      f.priority = r.u16();
      f.buffer_id = r.u32();
      f.out_port = r.u32();
      f.out_group = r.u32();
      f.flags = r.u16();
      r.skip(2);
      f.match = decode_match(r);
      f.instructions = decode_instructions(r);
      return f;
    }
    case OFPT_TABLE_MOD: {
      TableModMsg t;
      t.table_id = r.u8();
      r.skip(3);
      t.config = r.u32();
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "table_mod trailing bytes");
      }
      return t;
    }
    case OFPT_MULTIPART_REQUEST: {
      MultipartRequest m;
      m.mp_type = r.u16();
      m.flags = r.u16();
      r.skip(4);
      switch (m.mp_type) {
        case OFPMP_DESC:
          m.body = DescRequest{};
          break;
        case OFPMP_FLOW: {
          FlowStatsRequestBody b;
          b.table_id = r.u8();
          r.skip(3);
          b.out_port = r.u32();
          b.out_group = r.u32();
          r.skip(4);
          b.cookie = r.u64();
          b.cookie_mask = r.u64();
          b.match = decode_match(r);
          m.body = std::move(b);
          break;
        }
        case OFPMP_TABLE:
          m.body = TableStatsRequestBody{};
          break;
        case OFPMP_PORT_STATS: {
          PortStatsRequestBody b;
          b.port_no = r.u32();
          r.skip(4);
          m.body = b;
          break;
        }
        case OFPMP_QUEUE: {
          QueueStatsRequestBody b;
          b.port_no = r.u32();
          b.queue_id = r.u32();
          m.body = b;
          break;
        }
        default: {
          auto rest = r.rest();
          m.body = RawMultipartBody{Bytes(rest.begin(), rest.end())};
          break;
        }
      }
      return m;
    }
    case OFPT_MULTIPART_REPLY: {
      MultipartReply m;
      m.mp_type = r.u16();
      m.flags = r.u16();
      r.skip(4);
      switch (m.mp_type) {
        case OFPMP_DESC: {
          DescReply d;
          d.mfr_desc = decode_fixed_string(r, 256);
          d.hw_desc = decode_fixed_string(r, 256);
          d.sw_desc = decode_fixed_string(r, 256);
          d.serial_num = decode_fixed_string(r, 32);
          d.dp_desc = decode_fixed_string(r, 256);
          m.body = std::move(d);
          break;
        }
        case OFPMP_FLOW: {
          std::vector<FlowStatsEntry> entries;
          while (!r.empty()) {
            const std::size_t start = r.pos();
            FlowStatsEntry e;
            std::uint16_t entry_len = r.u16();
            e.table_id = r.u8();
            r.skip(1);
            e.duration_sec = r.u32();
            e.duration_nsec = r.u32();
            e.priority = r.u16();
            e.idle_timeout = r.u16();
            e.hard_timeout = r.u16();
            e.flags = r.u16();
            r.skip(4);
            e.cookie = r.u64();
            e.packet_count = r.u64();
            e.byte_count = r.u64();
            e.match = decode_match(r);
            if (entry_len < r.pos() - start) {
              fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
                   "flow stats entry length");
            }
            BytesReader ir(r.bytes(entry_len - (r.pos() - start)));
            e.instructions = decode_instructions(ir);
            entries.push_back(std::move(e));
          }
          m.body = std::move(entries);
          break;
        }
        case OFPMP_TABLE: {
          std::vector<TableStatsEntry> entries;
          while (!r.empty()) {
            TableStatsEntry e;
            e.table_id = r.u8();
            r.skip(3);
            e.active_count = r.u32();
            e.lookup_count = r.u64();
            e.matched_count = r.u64();
            entries.push_back(e);
          }
          m.body = std::move(entries);
          break;
        }
        case OFPMP_PORT_STATS: {
          std::vector<PortStatsEntry> entries;
          while (!r.empty()) {
            PortStatsEntry e;
            e.port_no = r.u32();
            r.skip(4);
            e.rx_packets = r.u64();
            e.tx_packets = r.u64();
            e.rx_bytes = r.u64();
            e.tx_bytes = r.u64();
            e.rx_dropped = r.u64();
            e.tx_dropped = r.u64();
            e.rx_errors = r.u64();
            e.tx_errors = r.u64();
            e.rx_frame_err = r.u64();
            e.rx_over_err = r.u64();
            e.rx_crc_err = r.u64();
            e.collisions = r.u64();
            e.duration_sec = r.u32();
            e.duration_nsec = r.u32();
            entries.push_back(e);
          }
          m.body = std::move(entries);
          break;
        }
        case OFPMP_QUEUE: {
          std::vector<QueueStatsEntry> entries;
          while (!r.empty()) {
            QueueStatsEntry e;
            e.port_no = r.u32();
            e.queue_id = r.u32();
            e.tx_bytes = r.u64();
            e.tx_packets = r.u64();
            e.tx_errors = r.u64();
            e.duration_sec = r.u32();
            e.duration_nsec = r.u32();
            entries.push_back(e);
          }
          m.body = std::move(entries);
          break;
        }
        default: {
          auto rest = r.rest();
          m.body = RawMultipartBody{Bytes(rest.begin(), rest.end())};
          break;
        }
      }
      return m;
    }
    case OFPT_BARRIER_REQUEST:
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "barrier_request body not empty");
      }
      return BarrierRequest{};
    case OFPT_BARRIER_REPLY:
      if (!r.empty()) {
        fail(false, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
             "barrier_reply body not empty");
      }
      return BarrierReply{};
    default: {
      auto rest = r.rest();
      return Unsupported{type, Bytes(rest.begin(), rest.end())};
    }
  }
}

}  // namespace

DecodeResult decode(BytesView bytes) {
  if (bytes.size() < kHeaderBytes) {
    return DecodeError{true, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
                       "short of a full header"};
  }
  const std::uint8_t version = bytes[0];
  const std::uint8_t type = bytes[1];
  const std::uint16_t length = load_be16(bytes.data() + 2);
  const std::uint32_t xid = load_be32(bytes.data() + 4);

  if (length < kHeaderBytes) {
    return DecodeError{true, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
                       "length field below header size"};
  }
  if (bytes.size() < length) {
    return DecodeError{true, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
                       "truncated message body"};
  }
  // Hello carries the sender's highest version; everything else must be 1.3.
  if (version != kVersion && type != OFPT_HELLO) {
    return DecodeError{false, OFPET_BAD_REQUEST, OFPBRC_BAD_VERSION,
                       "unsupported protocol version"};
  }

  BytesReader r(bytes.subspan(kHeaderBytes, length - kHeaderBytes));
  try {
    return OfpMessage{xid, decode_body(type, r)};
  } catch (const DecodeFailure& f) {
    return f.error;
  } catch (const TruncatedRead&) {
    return DecodeError{true, OFPET_BAD_REQUEST, OFPBRC_BAD_LEN,
                       "body shorter than structure"};
  }
}

// ---------------------------------------------------------------------------
// Pipeline bridges
// ---------------------------------------------------------------------------

namespace {

bool field_present(const Match& m, FieldId id,
                   const OxmField** out = nullptr) {
  for (const OxmField& f : m.fields) {
    if (f.field == id) {
      if (out) *out = &f;
      return true;
    }
  }
  return false;
}

std::uint64_t field_value_u64(const OxmField& f) {
  std::uint64_t v = 0;
  for (std::uint8_t b : f.value) v = v << 8 | b;
  return v;
}

// True when the match pins the field to an exact value.
bool exact_value(const Match& m, FieldId id, std::uint64_t expect) {
  const OxmField* f = nullptr;
  if (!field_present(m, id, &f) || f->mask) return false;
  return field_value_u64(*f) == expect;
}

std::optional<FlowModError> check_prerequisites(const Match& m) {
  auto bad = FlowModError{OFPET_BAD_MATCH, OFPBMC_BAD_PREREQ};
  const bool is_ipv4 = exact_value(m, FieldId::kEthType, kEthTypeIpv4);
  const bool is_mpls =
      exact_value(m, FieldId::kEthType, kEthTypeMplsUnicast) ||
      exact_value(m, FieldId::kEthType, kEthTypeMplsMulticast);

  for (const OxmField& f : m.fields) {
    switch (f.field) {
      case FieldId::kVlanPcp: {
        // Needs a vlan_vid match that guarantees a tag is present.
        const OxmField* vid = nullptr;
        if (!field_present(m, FieldId::kVlanVid, &vid) ||
            !(field_value_u64(*vid) & kVlanPresentBit)) {
          return bad;
        }
        break;
      }
      case FieldId::kIpDscp:
      case FieldId::kIpProto:
      case FieldId::kIpv4Src:
      case FieldId::kIpv4Dst:
        if (!is_ipv4) return bad;
        break;
      case FieldId::kMplsLabel:
      case FieldId::kMplsTc:
        if (!is_mpls) return bad;
        break;
      case FieldId::kTcpSrc:
      case FieldId::kTcpDst:
        if (!exact_value(m, FieldId::kIpProto, kIpProtoTcp)) return bad;
        break;
      case FieldId::kUdpSrc:
      case FieldId::kUdpDst:
        if (!exact_value(m, FieldId::kIpProto, kIpProtoUdp)) return bad;
        break;
      default:
        break;
    }
  }
  return std::nullopt;
}

}  // namespace

std::variant<MaskedKey, FlowModError> match_to_key(const Match& match) {
  bool seen[kFieldCount] = {};
  for (const OxmField& f : match.fields) {
    const FieldInfo& info = field_info(f.field);
    auto idx = static_cast<std::size_t>(f.field);
    if (seen[idx]) return FlowModError{OFPET_BAD_MATCH, OFPBMC_DUP_FIELD};
    seen[idx] = true;

    if (f.mask) {
      if (!info.maskable) {
        return FlowModError{OFPET_BAD_MATCH, OFPBMC_BAD_MASK};
      }
      bool all_zero = true;
      for (std::size_t i = 0; i < info.width; ++i) {
        if ((*f.mask)[i]) all_zero = false;
        if (f.value[i] & ~(*f.mask)[i]) {
          return FlowModError{OFPET_BAD_MATCH, OFPBMC_BAD_WILDCARDS};
        }
      }
      if (all_zero) return FlowModError{OFPET_BAD_MATCH, OFPBMC_BAD_MASK};
    }
    if (info.max_value != 0 && field_value_u64(f) > info.max_value) {
      return FlowModError{OFPET_BAD_MATCH, OFPBMC_BAD_VALUE};
    }
  }
  if (auto err = check_prerequisites(match)) return *err;

  MaskedKey key = MaskedKey::wildcard(kMatchKeyWidth);
  for (const OxmField& f : match.fields) {
    const FieldInfo& info = field_info(f.field);
    Bytes mask = f.mask.value_or(Bytes(info.width, 0xff));
    if (f.field == FieldId::kVlanVid && !f.mask) {
      // Exact vlan_vid: only the 13 defined bits participate.
      mask = {0x1f, 0xff};
    }
    apply_field_bytes(key, f.field, f.value, mask);
  }
  return key;
}

Match key_to_match(const MaskedKey& key) {
  Match m;
  auto [proto_value, proto_mask] = read_field(key, FieldId::kIpProto);
  const bool proto_exact = proto_mask == 0xff;

  for (const FieldInfo& info : all_fields()) {
    // l4 ports: pick the TCP or UDP spelling per ip_proto.
    if (info.id == FieldId::kTcpSrc || info.id == FieldId::kTcpDst) {
      if (!(proto_exact && proto_value == kIpProtoTcp)) continue;
    } else if (info.id == FieldId::kUdpSrc || info.id == FieldId::kUdpDst) {
      if (!(proto_exact && proto_value == kIpProtoUdp)) continue;
    }

    Bytes value(key.value.begin() + info.key_offset,
                key.value.begin() + info.key_offset + info.width);
    Bytes mask(key.mask.begin() + info.key_offset,
               key.mask.begin() + info.key_offset + info.width);
    bool any = false, full = true;
    for (std::size_t i = 0; i < info.width; ++i) {
      if (mask[i] != 0) any = true;
      if (mask[i] != 0xff) full = false;
    }
    if (!any) continue;
    OxmField f;
    f.field = info.id;
    f.value = std::move(value);
    if (info.id == FieldId::kVlanVid && (load_be16(mask.data()) & 0x1fff) ==
                                            0x1fff) {
      // 13 care bits = exact vlan match.
      m.fields.push_back(std::move(f));
      continue;
    }
    if (!full) f.mask = std::move(mask);
    m.fields.push_back(std::move(f));
  }
  return m;
}

std::variant<InstructionSet, FlowModError> lower_instructions(
    const std::vector<Instruction>& instructions) {
  InstructionSet set;
  bool have_goto = false, have_write = false;
  for (const Instruction& instr : instructions) {
    if (std::holds_alternative<GotoTableInstr>(instr)) {
      if (have_goto) {
        return FlowModError{OFPET_BAD_INSTRUCTION, OFPBIC_UNSUP_INST};
      }
      have_goto = true;
      set.goto_table = std::get<GotoTableInstr>(instr).table_id;
    } else if (std::holds_alternative<WriteActionsInstr>(instr)) {
      if (have_write) {
        return FlowModError{OFPET_BAD_INSTRUCTION, OFPBIC_UNSUP_INST};
      }
      have_write = true;
      set.write_actions = std::get<WriteActionsInstr>(instr).actions;
    } else if (std::holds_alternative<ClearActionsInstr>(instr)) {
      set.clear_actions = true;
    } else {
      // Apply-Actions and everything else: this pipeline only accumulates an
      // action set.
      return FlowModError{OFPET_BAD_INSTRUCTION, OFPBIC_UNSUP_INST};
    }
  }
  return set;
}

std::optional<FlowModError> validate_actions(std::span<const Action> actions,
                                             std::uint32_t port_count) {
  for (const Action& a : actions) {
    switch (a.kind) {
      case Action::Kind::kOutput:
        if (a.port >= port_count && a.port != kPortController &&
            a.port != kPortAll) {
          return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_OUT_PORT};
        }
        break;
      case Action::Kind::kSetField: {
        const FieldInfo& info = field_info(a.field);
        if (a.field == FieldId::kInPort || a.field == FieldId::kEthType ||
            a.field == FieldId::kIpProto) {
          return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_SET_TYPE};
        }
        if (a.set_value.size() != info.width) {
          return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_SET_LEN};
        }
        if (info.max_value != 0) {
          std::uint64_t v = 0;
          for (std::uint8_t b : a.set_value) v = v << 8 | b;
          // set_field on vlan_vid takes the 12-bit vid, PRESENT bit optional.
          std::uint64_t limit = a.field == FieldId::kVlanVid
                                    ? (kVlanPresentBit | 0x0fff)
                                    : info.max_value;
          if (v > limit) {
            return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_SET_ARGUMENT};
          }
        }
        break;
      }
      case Action::Kind::kPushVlan:
        if (a.ethertype != kEthTypeVlan && a.ethertype != kEthTypeQinQ) {
          return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_ARGUMENT};
        }
        break;
      case Action::Kind::kPushMpls:
        if (a.ethertype != kEthTypeMplsUnicast &&
            a.ethertype != kEthTypeMplsMulticast) {
          return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_ARGUMENT};
        }
        break;
      case Action::Kind::kUnsupported:
        return FlowModError{OFPET_BAD_ACTION, OFPBAC_BAD_TYPE};
      default:
        break;
    }
  }
  return std::nullopt;
}

std::variant<FlowModRequest, FlowModError> lower_flow_mod(
    const FlowModMsg& msg, std::uint32_t port_count) {
  auto key = match_to_key(msg.match);
  if (std::holds_alternative<FlowModError>(key)) {
    return std::get<FlowModError>(key);
  }
  auto instructions = lower_instructions(msg.instructions);
  if (std::holds_alternative<FlowModError>(instructions)) {
    return std::get<FlowModError>(instructions);
  }
  const InstructionSet& set = std::get<InstructionSet>(instructions);
  if (set.write_actions) {
    if (auto err = validate_actions(*set.write_actions, port_count)) {
      return *err;
    }
  }
  FlowModRequest req;
  req.command = msg.command;
  req.table_id = msg.table_id;
  req.priority = msg.priority;
  req.idle_timeout = msg.idle_timeout;
  req.hard_timeout = msg.hard_timeout;
  req.cookie = msg.cookie;
  req.cookie_mask = msg.cookie_mask;
  req.buffer_id = msg.buffer_id;
  req.out_port = msg.out_port;
  req.flags = msg.flags;
  req.match = std::get<MaskedKey>(std::move(key));
  req.instructions = set;
  return req;
}

std::vector<Instruction> instructions_to_wire(const InstructionSet& set) {
  std::vector<Instruction> out;
  if (set.clear_actions) out.push_back(ClearActionsInstr{});
  if (set.write_actions) out.push_back(WriteActionsInstr{*set.write_actions});
  if (set.goto_table) out.push_back(GotoTableInstr{*set.goto_table});
  return out;
}

// ---------------------------------------------------------------------------
// describe
// ---------------------------------------------------------------------------

namespace {

const char* mp_type_name(std::uint16_t t) {
  switch (t) {
    case OFPMP_DESC:
      return "DESC";
    case OFPMP_FLOW:
      return "FLOW";
    case OFPMP_TABLE:
      return "TABLE";
    case OFPMP_PORT_STATS:
      return "PORT_STATS";
    case OFPMP_QUEUE:
      return "QUEUE";
    default:
      return "UNKNOWN";
  }
}

void describe_match(std::ostringstream& os, const Match& m) {
  os << "{";
  bool first = true;
  for (const OxmField& f : m.fields) {
    if (!first) os << ",";
    first = false;
    os << field_info(f.field).name << "=0x" << to_hex(f.value);
    if (f.mask) os << "/0x" << to_hex(*f.mask);
  }
  os << "}";
}

void describe_action(std::ostringstream& os, const Action& a) {
  switch (a.kind) {
    case Action::Kind::kOutput:
      os << "output:";
      if (a.port == kPortController) {
        os << "CONTROLLER(max_len=" << a.max_len << ")";
      } else if (a.port == kPortAll) {
        os << "ALL";
      } else {
        os << a.port;
      }
      break;
    case Action::Kind::kPushVlan:
      os << "push_vlan:0x" << std::hex << a.ethertype << std::dec;
      break;
    case Action::Kind::kPopVlan:
      os << "pop_vlan";
      break;
    case Action::Kind::kPushMpls:
      os << "push_mpls:0x" << std::hex << a.ethertype << std::dec;
      break;
    case Action::Kind::kPopMpls:
      os << "pop_mpls:0x" << std::hex << a.ethertype << std::dec;
      break;
    case Action::Kind::kSetField:
      os << "set_field:" << field_info(a.field).name << "=0x"
         << to_hex(a.set_value);
      break;
    case Action::Kind::kSetNwTtl:
      os << "set_nw_ttl:" << static_cast<int>(a.ttl);
      break;
    case Action::Kind::kDecNwTtl:
      os << "dec_nw_ttl";
      break;
    case Action::Kind::kUnsupported:
      os << "unsupported(type=" << a.raw_type << ")";
      break;
  }
}

void describe_actions(std::ostringstream& os,
                      const std::vector<Action>& actions) {
  os << "[";
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) os << ",";
    describe_action(os, actions[i]);
  }
  os << "]";
}

}  // namespace

std::string describe(const OfpMessage& msg) {
  std::ostringstream os;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Hello>) {
          os << "HELLO";
        } else if constexpr (std::is_same_v<T, ErrorMsg>) {
          os << "ERROR type=" << b.err_type << " code=" << b.err_code;
        } else if constexpr (std::is_same_v<T, EchoRequest>) {
          os << "ECHO_REQUEST payload=" << b.payload.size() << "B";
        } else if constexpr (std::is_same_v<T, EchoReply>) {
          os << "ECHO_REPLY payload=" << b.payload.size() << "B";
        } else if constexpr (std::is_same_v<T, FeaturesRequest>) {
          os << "FEATURES_REQUEST";
        } else if constexpr (std::is_same_v<T, FeaturesReply>) {
          os << "FEATURES_REPLY dpid=0x" << std::hex << b.datapath_id
             << std::dec << " tables=" << static_cast<int>(b.n_tables)
             << " buffers=" << b.n_buffers;
        } else if constexpr (std::is_same_v<T, GetConfigRequest>) {
          os << "GET_CONFIG_REQUEST";
        } else if constexpr (std::is_same_v<T, GetConfigReply>) {
          os << "GET_CONFIG_REPLY miss_send_len=" << b.miss_send_len;
        } else if constexpr (std::is_same_v<T, SetConfig>) {
          os << "SET_CONFIG miss_send_len=" << b.miss_send_len;
        } else if constexpr (std::is_same_v<T, PacketIn>) {
          os << "PACKET_IN buffer=";
          if (b.buffer_id == kNoBuffer) {
            os << "NO_BUFFER";
          } else {
            os << b.buffer_id;
          }
          os << " reason=" << static_cast<int>(b.reason)
             << " table=" << static_cast<int>(b.table_id)
             << " total_len=" << b.total_len << " match=";
          describe_match(os, b.match);
          os << " payload=" << b.payload.size() << "B";
        } else if constexpr (std::is_same_v<T, FlowRemoved>) {
          os << "FLOW_REMOVED table=" << static_cast<int>(b.table_id)
             << " reason=" << static_cast<int>(b.reason)
             << " packets=" << b.packet_count << " match=";
          describe_match(os, b.match);
        } else if constexpr (std::is_same_v<T, PacketOut>) {
          os << "PACKET_OUT buffer=";
          if (b.buffer_id == kNoBuffer) {
            os << "NO_BUFFER";
          } else {
            os << b.buffer_id;
          }
          os << " in_port=" << b.in_port << " actions=";
          describe_actions(os, b.actions);
          os << " payload=" << b.payload.size() << "B";
        } else if constexpr (std::is_same_v<T, FlowModMsg>) {
          static const char* kCmd[] = {"ADD", "MODIFY", "MODIFY_STRICT",
                                       "DELETE", "DELETE_STRICT"};
          os << "FLOW_MOD "
             << (b.command <= 4 ? kCmd[b.command] : "?")
             << " table=" << static_cast<int>(b.table_id)
             << " priority=" << b.priority << " match=";
          describe_match(os, b.match);
          for (const Instruction& i : b.instructions) {
            if (std::holds_alternative<GotoTableInstr>(i)) {
              os << " goto:"
                 << static_cast<int>(std::get<GotoTableInstr>(i).table_id);
            } else if (std::holds_alternative<WriteActionsInstr>(i)) {
              os << " write_actions=";
              describe_actions(os, std::get<WriteActionsInstr>(i).actions);
            } else if (std::holds_alternative<ApplyActionsInstr>(i)) {
              os << " apply_actions=";
              describe_actions(os, std::get<ApplyActionsInstr>(i).actions);
            } else if (std::holds_alternative<ClearActionsInstr>(i)) {
              os << " clear_actions";
            } else {
              os << " unsupported_instr";
            }
          }
        } else if constexpr (std::is_same_v<T, TableModMsg>) {
          os << "TABLE_MOD table=" << static_cast<int>(b.table_id)
             << " config=0x" << std::hex << b.config << std::dec;
        } else if constexpr (std::is_same_v<T, MultipartRequest>) {
          os << "MULTIPART_REQUEST " << mp_type_name(b.mp_type);
        } else if constexpr (std::is_same_v<T, MultipartReply>) {
          os << "MULTIPART_REPLY " << mp_type_name(b.mp_type);
          if (const auto* flows =
                  std::get_if<std::vector<FlowStatsEntry>>(&b.body)) {
            os << " entries=" << flows->size();
          } else if (const auto* tables =
                         std::get_if<std::vector<TableStatsEntry>>(&b.body)) {
            os << " entries=" << tables->size();
          } else if (const auto* ports =
                         std::get_if<std::vector<PortStatsEntry>>(&b.body)) {
            os << " entries=" << ports->size();
          } else if (const auto* queues =
                         std::get_if<std::vector<QueueStatsEntry>>(&b.body)) {
            os << " entries=" << queues->size();
          }
        } else if constexpr (std::is_same_v<T, BarrierRequest>) {
          os << "BARRIER_REQUEST";
        } else if constexpr (std::is_same_v<T, BarrierReply>) {
          os << "BARRIER_REPLY";
        } else if constexpr (std::is_same_v<T, Unsupported>) {
          os << "UNSUPPORTED type=" << static_cast<int>(b.wire_type)
             << " body=" << b.body.size() << "B";
        }
      },
      msg.body);
  os << " xid=" << msg.xid;
  return os.str();
}

}  // namespace flowfabric::ofp
