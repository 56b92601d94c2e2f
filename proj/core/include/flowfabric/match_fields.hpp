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

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "flowfabric/bytes.hpp"
#include "flowfabric/match_engine.hpp"
#include "flowfabric/wire_packet.hpp"

namespace flowfabric {

// Match fields supported by the pipeline: exactly the HeaderTuple set. TCP
// and UDP ports share the l4 slots of the key; the ip_proto prerequisite
// keeps them disjoint.
enum class FieldId : std::uint8_t {
  kInPort,
  kEthDst,
  kEthSrc,
  kEthType,
  kVlanVid,
  kVlanPcp,
  kIpDscp,
  kIpProto,
  kMplsTc,
  kMplsLabel,
  kIpv4Src,
  kIpv4Dst,
  kTcpSrc,
  kTcpDst,
  kUdpSrc,
  kUdpDst,
};

constexpr std::size_t kFieldCount = 16;

// Fixed serialization of a HeaderTuple into the matcher key. Field order and
// widths are build constants; absent optional fields serialize as zero with
// the flow side free to wildcard them.
//
//   offset  width  field
//        0      4  in_port
//        4      6  eth_dst
//       10      6  eth_src
//       16      2  eth_type
//       18      2  vlan_vid   (bit 0x1000 = tag present)
//       20      1  vlan_pcp
//       21      1  ip_dscp
//       22      1  ip_proto
//       23      1  mpls_tc
//       24      4  mpls_label
//       28      4  ipv4_src
//       32      4  ipv4_dst
//       36      2  l4_src     (tcp_src / udp_src)
//       38      2  l4_dst     (tcp_dst / udp_dst)
constexpr std::size_t kMatchKeyWidth = 40;

// Mirrors OFPVID_PRESENT: set in the key's vlan_vid halfword for any tagged
// frame, letting flows distinguish untagged from VID 0.
constexpr std::uint16_t kVlanPresentBit = 0x1000;

struct FieldInfo {
  FieldId id;
  const char* name;
  std::uint8_t oxm_field;  // OXM_OF_* number, class OPENFLOW_BASIC
  std::size_t key_offset;
  std::size_t width;      // bytes in key and on the wire
  bool maskable;          // OXM hasmask permitted
  std::uint64_t max_value;  // 0 = unconstrained (full width)
};

const FieldInfo& field_info(FieldId id);
std::span<const FieldInfo, kFieldCount> all_fields();
const FieldInfo* field_by_oxm(std::uint8_t oxm_field);

// Serializes the tuple into the fixed key layout.
Bytes serialize_tuple(const HeaderTuple& tuple);

// Writes `value` (low `width` bytes, big-endian) into the key region of
// `field`, with `mask` restricting the care bits (nullopt = exact). Keeps the
// MaskedKey canonical. Used to assemble flow-entry keys from OXM fields.
void apply_field(MaskedKey& key, FieldId field, std::uint64_t value,
                 std::optional<std::uint64_t> mask);

// Same, with arbitrary-width byte input (MAC addresses).
void apply_field_bytes(MaskedKey& key, FieldId field, BytesView value,
                       BytesView mask);

// Reads the field back out of a masked key: (value, mask) pair as integers.
std::pair<std::uint64_t, std::uint64_t> read_field(const MaskedKey& key,
                                                   FieldId field);

}  // namespace flowfabric
