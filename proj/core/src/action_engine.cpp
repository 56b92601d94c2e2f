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

#include <algorithm>

namespace flowfabric {

Action Action::output(std::uint32_t port, std::uint16_t max_len) {
  Action a;
  a.kind = Kind::kOutput;
  a.port = port;
  a.max_len = max_len;
  return a;
}
Action Action::push_vlan(std::uint16_t ethertype) {
  Action a;
  a.kind = Kind::kPushVlan;
  a.ethertype = ethertype;
  return a;
}
Action Action::pop_vlan() {
  Action a;
  a.kind = Kind::kPopVlan;
  return a;
}
Action Action::push_mpls(std::uint16_t ethertype) {
  Action a;
  a.kind = Kind::kPushMpls;
  a.ethertype = ethertype;
  return a;
}
Action Action::pop_mpls(std::uint16_t ethertype) {
  Action a;
  a.kind = Kind::kPopMpls;
  a.ethertype = ethertype;
  return a;
}
Action Action::set_field(FieldId field, std::uint64_t value) {
  const FieldInfo& f = field_info(field);
  Bytes v(f.width);
  for (std::size_t i = 0; i < f.width; ++i) {
    v[f.width - 1 - i] = static_cast<std::uint8_t>(value >> (8 * i));
  }
  return set_field_bytes(field, std::move(v));
}
Action Action::set_field_bytes(FieldId field, Bytes value) {
  Action a;
  a.kind = Kind::kSetField;
  a.field = field;
  a.set_value = std::move(value);
  return a;
}
Action Action::set_nw_ttl(std::uint8_t ttl) {
  Action a;
  a.kind = Kind::kSetNwTtl;
  a.ttl = ttl;
  return a;
}
Action Action::dec_nw_ttl() {
  Action a;
  a.kind = Kind::kDecNwTtl;
  return a;
}

void ActionSet::write(const Action& a) {
  switch (a.kind) {
    case Action::Kind::kOutput:
      output_action = a;
      break;
    case Action::Kind::kPushVlan:
      push_vlan_ethertype = a.ethertype;
      break;
    case Action::Kind::kPopVlan:
      pop_vlan = true;
      break;
    case Action::Kind::kPushMpls:
      push_mpls_ethertype = a.ethertype;
      break;
    case Action::Kind::kPopMpls:
      pop_mpls_ethertype = a.ethertype;
      break;
    case Action::Kind::kSetField:
      set_fields[a.field] = a.set_value;
      break;
    case Action::Kind::kSetNwTtl:
      nw_ttl = a.ttl;
      break;
    case Action::Kind::kDecNwTtl:
      dec_nw_ttl = true;
      break;
    case Action::Kind::kUnsupported:
      break;  // filtered out during flow-mod validation
  }
}

void ActionSet::clear() { *this = ActionSet{}; }

bool ActionSet::empty() const { return *this == ActionSet{}; }

std::vector<Action> ActionSet::to_ordered_list() const {
  std::vector<Action> list;
  if (pop_vlan) list.push_back(Action::pop_vlan());
  if (pop_mpls_ethertype) list.push_back(Action::pop_mpls(*pop_mpls_ethertype));
  if (push_mpls_ethertype) {
    list.push_back(Action::push_mpls(*push_mpls_ethertype));
  }
  if (push_vlan_ethertype) {
    list.push_back(Action::push_vlan(*push_vlan_ethertype));
  }
  if (nw_ttl) list.push_back(Action::set_nw_ttl(*nw_ttl));
  if (dec_nw_ttl) list.push_back(Action::dec_nw_ttl());
  for (const auto& [field, value] : set_fields) {
    list.push_back(Action::set_field_bytes(field, value));
  }
  if (output_action) list.push_back(*output_action);
  return list;
}

namespace frame_edit {

namespace {

// Byte offsets of the headers present in a frame, derived by walking the
// EtherType chain the same way the parser does.
struct Layout {
  std::size_t ethertype_offset = 12;  // the EtherType after any VLAN tags
  int vlan_tags = 0;
  bool has_mpls = false;
  std::size_t mpls_offset = 0;
  std::ptrdiff_t l3_offset = -1;  // IPv4 header, -1 if absent
  std::ptrdiff_t l4_offset = -1;
  std::uint8_t ip_proto = 0;
};

Layout scan(const Bytes& f) {
  Layout lo;
  std::size_t off = 12;
  if (f.size() < 14) return lo;
  std::uint16_t et = load_be16(f.data() + off);
  while ((et == kEthTypeVlan || et == kEthTypeQinQ) && off + 6 <= f.size()) {
    ++lo.vlan_tags;
    off += 4;
    et = load_be16(f.data() + off);
  }
  lo.ethertype_offset = off;
  off += 2;
  if (et == kEthTypeMplsUnicast || et == kEthTypeMplsMulticast) {
    lo.has_mpls = true;
    lo.mpls_offset = off;
    while (off + 4 <= f.size()) {
      std::uint32_t shim = load_be32(f.data() + off);
      off += 4;
      if (shim & 0x100) break;
    }
    if (off < f.size() && (f[off] >> 4) == 4) lo.l3_offset = off;
  } else if (et == kEthTypeIpv4 && off < f.size()) {
    lo.l3_offset = off;
  }
  if (lo.l3_offset >= 0) {
    std::size_t l3 = static_cast<std::size_t>(lo.l3_offset);
    std::size_t ihl = f[l3] & 0x0f;
    if (ihl >= kIpv4MinIhl && l3 + ihl * 4 <= f.size()) {
      lo.ip_proto = f[l3 + 9];
      if (lo.ip_proto == kIpProtoTcp || lo.ip_proto == kIpProtoUdp) {
        std::size_t l4 = l3 + ihl * 4;
        if (l4 + 4 <= f.size()) lo.l4_offset = l4;
      }
    } else {
      lo.l3_offset = -1;
    }
  }
  return lo;
}

// RFC 1071 one's-complement sum over the IPv4 header.
std::uint16_t ipv4_header_checksum(const std::uint8_t* hdr,
                                   std::size_t bytes) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < bytes; i += 2) {
    if (i == 10) continue;  // checksum field counts as zero
    sum += load_be16(hdr + i);
  }
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

void refresh_checksum_at(Bytes& f, std::size_t l3) {
  std::size_t ihl = (f[l3] & 0x0f) * 4;
  store_be16(f.data() + l3 + 10, ipv4_header_checksum(f.data() + l3, ihl));
}

}  // namespace

std::uint16_t refresh_ipv4_checksum(Bytes& frame) {
  Layout lo = scan(frame);
  if (lo.l3_offset < 0) return 0;
  refresh_checksum_at(frame, static_cast<std::size_t>(lo.l3_offset));
  return load_be16(frame.data() + lo.l3_offset + 10);
}

bool push_vlan(Bytes& frame, std::uint16_t tpid) {
  if (frame.size() < 14) return false;
  // New outermost tag at offset 12; TCI copied from the existing outer tag
  // when present, zero otherwise.
  std::uint16_t existing = load_be16(frame.data() + 12);
  std::uint16_t tci = 0;
  if (existing == kEthTypeVlan || existing == kEthTypeQinQ) {
    tci = load_be16(frame.data() + 14);
  }
  std::uint8_t tag[4];
  store_be16(tag, tpid);
  store_be16(tag + 2, tci);
  frame.insert(frame.begin() + 12, tag, tag + 4);
  return true;
}

bool pop_vlan(Bytes& frame) {
  if (frame.size() < 18) return false;
  std::uint16_t outer = load_be16(frame.data() + 12);
  if (outer != kEthTypeVlan && outer != kEthTypeQinQ) return false;
  frame.erase(frame.begin() + 12, frame.begin() + 16);
  return true;
}

bool push_mpls(Bytes& frame, std::uint16_t ethertype) {
  Layout lo = scan(frame);
  if (frame.size() < static_cast<std::size_t>(lo.ethertype_offset) + 2) {
    return false;
  }
  std::size_t shim_at = lo.ethertype_offset + 2;
  std::uint32_t shim;
  if (lo.has_mpls && shim_at + 4 <= frame.size()) {
    // Copy label/TC/TTL from the old outermost shim; it is no longer bottom.
    shim = load_be32(frame.data() + shim_at) & ~0x100u;
  } else {
    std::uint8_t ttl = 64;
    if (lo.l3_offset >= 0 &&
        static_cast<std::size_t>(lo.l3_offset) + 9 <= frame.size()) {
      ttl = frame[lo.l3_offset + 8];
    }
    shim = 0x100u | ttl;  // label 0, tc 0, bottom of stack
  }
  std::uint8_t bytes4[4];
  store_be32(bytes4, shim);
  frame.insert(frame.begin() + shim_at, bytes4, bytes4 + 4);
  store_be16(frame.data() + lo.ethertype_offset, ethertype);
  return true;
}

bool pop_mpls(Bytes& frame, std::uint16_t ethertype) {
  Layout lo = scan(frame);
  if (!lo.has_mpls || lo.mpls_offset + 4 > frame.size()) return false;
  frame.erase(frame.begin() + lo.mpls_offset,
              frame.begin() + lo.mpls_offset + 4);
  store_be16(frame.data() + lo.ethertype_offset, ethertype);
  return true;
}

bool set_field(Bytes& frame, FieldId field, BytesView value) {
  Layout lo = scan(frame);
  const FieldInfo& info = field_info(field);
  if (value.size() != info.width) return false;
  auto u = [&](std::size_t n) {  // low n bytes of value as integer
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) v = v << 8 | value[i];
    return v;
  };
  switch (field) {
    case FieldId::kEthDst:
      std::copy(value.begin(), value.end(), frame.begin());
      return true;
    case FieldId::kEthSrc:
      std::copy(value.begin(), value.end(), frame.begin() + 6);
      return true;
    case FieldId::kEthType:
    case FieldId::kInPort:
      return false;  // not settable
    case FieldId::kVlanVid: {
      if (lo.vlan_tags == 0) return false;
      std::uint16_t tci = load_be16(frame.data() + 14);
      tci = static_cast<std::uint16_t>((tci & 0xf000) | (u(2) & 0x0fff));
      store_be16(frame.data() + 14, tci);
      return true;
    }
    case FieldId::kVlanPcp: {
      if (lo.vlan_tags == 0) return false;
      std::uint16_t tci = load_be16(frame.data() + 14);
      tci = static_cast<std::uint16_t>((tci & 0x1fff) | ((u(1) & 0x7) << 13));
      store_be16(frame.data() + 14, tci);
      return true;
    }
    case FieldId::kMplsLabel: {
      if (!lo.has_mpls) return false;
      std::uint32_t shim = load_be32(frame.data() + lo.mpls_offset);
      shim = (shim & 0x00000fff) |
             (static_cast<std::uint32_t>(u(4) & 0xfffff) << 12);
      store_be32(frame.data() + lo.mpls_offset, shim);
      return true;
    }
    case FieldId::kMplsTc: {
      if (!lo.has_mpls) return false;
      std::uint32_t shim = load_be32(frame.data() + lo.mpls_offset);
      shim = (shim & ~0xe00u) | (static_cast<std::uint32_t>(u(1) & 0x7) << 9);
      store_be32(frame.data() + lo.mpls_offset, shim);
      return true;
    }
    case FieldId::kIpDscp: {
      if (lo.l3_offset < 0) return false;
      std::uint8_t& tos = frame[lo.l3_offset + 1];
      tos = static_cast<std::uint8_t>((tos & 0x03) | ((u(1) & 0x3f) << 2));
      refresh_checksum_at(frame, lo.l3_offset);
      return true;
    }
    case FieldId::kIpv4Src: {
      if (lo.l3_offset < 0) return false;
      std::copy(value.begin(), value.end(), frame.begin() + lo.l3_offset + 12);
      refresh_checksum_at(frame, lo.l3_offset);
      return true;
    }
    case FieldId::kIpv4Dst: {
      if (lo.l3_offset < 0) return false;
      std::copy(value.begin(), value.end(), frame.begin() + lo.l3_offset + 16);
      refresh_checksum_at(frame, lo.l3_offset);
      return true;
    }
    case FieldId::kIpProto:
      return false;  // not settable
    case FieldId::kTcpSrc:
    case FieldId::kTcpDst: {
      if (lo.l4_offset < 0 || lo.ip_proto != kIpProtoTcp) return false;
      std::size_t at = lo.l4_offset + (field == FieldId::kTcpDst ? 2 : 0);
      store_be16(frame.data() + at, static_cast<std::uint16_t>(u(2)));
      return true;
    }
    case FieldId::kUdpSrc:
    case FieldId::kUdpDst: {
      if (lo.l4_offset < 0 || lo.ip_proto != kIpProtoUdp) return false;
      std::size_t at = lo.l4_offset + (field == FieldId::kUdpDst ? 2 : 0);
      store_be16(frame.data() + at, static_cast<std::uint16_t>(u(2)));
      return true;
    }
  }
  return false;
}

bool set_ipv4_ttl(Bytes& frame, std::uint8_t ttl) {
  Layout lo = scan(frame);
  if (lo.l3_offset < 0) return false;
  frame[lo.l3_offset + 8] = ttl;
  refresh_checksum_at(frame, lo.l3_offset);
  return true;
}

int dec_ipv4_ttl(Bytes& frame) {
  Layout lo = scan(frame);
  if (lo.l3_offset < 0) return -1;
  std::uint8_t& ttl = frame[lo.l3_offset + 8];
  if (ttl <= 1) return 0;
  --ttl;
  refresh_checksum_at(frame, lo.l3_offset);
  return 1;
}

}  // namespace frame_edit

std::vector<Emission> ActionExecutor::execute(const RawFrame& frame,
                                              const ActionSet& actions) {
  return execute_list(frame, actions.to_ordered_list());
}

std::vector<Emission> ActionExecutor::execute_list(
    const RawFrame& frame, std::span<const Action> actions) {
  std::vector<Emission> out;
  Bytes work = frame.data;
  bool emitted = false;

  for (const Action& a : actions) {
    switch (a.kind) {
      case Action::Kind::kPopVlan:
        if (!frame_edit::pop_vlan(work)) counters_.skipped_actions++;
        break;
      case Action::Kind::kPopMpls:
        if (!frame_edit::pop_mpls(work, a.ethertype)) {
          counters_.skipped_actions++;
        }
        break;
      case Action::Kind::kPushMpls:
        if (!frame_edit::push_mpls(work, a.ethertype)) {
          counters_.skipped_actions++;
        }
        break;
      case Action::Kind::kPushVlan:
        if (!frame_edit::push_vlan(work, a.ethertype)) {
          counters_.skipped_actions++;
        }
        break;
      case Action::Kind::kSetNwTtl:
        if (!frame_edit::set_ipv4_ttl(work, a.ttl)) {
          counters_.skipped_actions++;
        }
        break;
      case Action::Kind::kDecNwTtl: {
        int r = frame_edit::dec_ipv4_ttl(work);
        if (r == 0) {
          // TTL expired: the whole execution drops the frame.
          counters_.dropped_ttl++;
          return {};
        }
        if (r < 0) counters_.skipped_actions++;
        break;
      }
      case Action::Kind::kSetField:
        if (!frame_edit::set_field(work, a.field, a.set_value)) {
          counters_.skipped_actions++;
        }
        break;
      case Action::Kind::kOutput: {
        if (a.port == kPortAll) {
          for (std::uint32_t p = 0; p < port_count_; ++p) {
            if (p == frame.ingress_port) continue;
            out.push_back({p, work});
            counters_.emitted++;
            emitted = true;
          }
        } else {
          out.push_back({a.port, work});
          counters_.emitted++;
          emitted = true;
        }
        break;
      }
      case Action::Kind::kUnsupported:
        counters_.skipped_actions++;
        break;
    }
  }

  if (!emitted) counters_.dropped_empty++;
  return out;
}

std::optional<std::uint32_t> PacketBuffer::buffer(RawFrame frame,
                                                  std::uint8_t miss_table,
                                                  MonotonicNs now) {
  std::lock_guard lock(mu_);
  if (slots_.size() >= capacity_) return std::nullopt;
  while (next_id_ == kNoBuffer || slots_.count(next_id_)) ++next_id_;
  std::uint32_t id = next_id_++;
  slots_[id] = BufferedPacket{std::move(frame), miss_table, now};
  return id;
}

std::optional<BufferedPacket> PacketBuffer::release(std::uint32_t buffer_id) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(buffer_id);
  if (it == slots_.end()) return std::nullopt;
  BufferedPacket p = std::move(it->second);
  slots_.erase(it);
  return p;
}

std::size_t PacketBuffer::expire(MonotonicNs now, MonotonicNs ttl) {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (auto it = slots_.begin(); it != slots_.end();) {
    if (now - it->second.buffered_at >= ttl) {
      it = slots_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

std::size_t PacketBuffer::live() const {
  std::lock_guard lock(mu_);
  return slots_.size();
}

}  // namespace flowfabric
