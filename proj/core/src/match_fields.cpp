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

#include "flowfabric/match_fields.hpp"

#include <array>
#include <stdexcept>

namespace flowfabric {

namespace {

// OXM_OF_* numbers from OpenFlow 1.3.1, class OPENFLOW_BASIC.
constexpr std::array<FieldInfo, kFieldCount> kFields = {{
    {FieldId::kInPort, "in_port", 0, 0, 4, false, 0},
    {FieldId::kEthDst, "eth_dst", 3, 4, 6, true, 0},
    {FieldId::kEthSrc, "eth_src", 4, 10, 6, true, 0},
    {FieldId::kEthType, "eth_type", 5, 16, 2, false, 0},
    {FieldId::kVlanVid, "vlan_vid", 6, 18, 2, true, 0x1fff},
    {FieldId::kVlanPcp, "vlan_pcp", 7, 20, 1, false, 0x7},
    {FieldId::kIpDscp, "ip_dscp", 8, 21, 1, false, 0x3f},
    {FieldId::kIpProto, "ip_proto", 10, 22, 1, false, 0},
    {FieldId::kMplsTc, "mpls_tc", 35, 23, 1, false, 0x7},
    {FieldId::kMplsLabel, "mpls_label", 34, 24, 4, false, 0xfffff},
    {FieldId::kIpv4Src, "ipv4_src", 11, 28, 4, true, 0},
    {FieldId::kIpv4Dst, "ipv4_dst", 12, 32, 4, true, 0},
    {FieldId::kTcpSrc, "tcp_src", 13, 36, 2, false, 0},
    {FieldId::kTcpDst, "tcp_dst", 14, 38, 2, false, 0},
    {FieldId::kUdpSrc, "udp_src", 15, 36, 2, false, 0},
    {FieldId::kUdpDst, "udp_dst", 16, 38, 2, false, 0},
}};

void store_be(std::uint8_t* p, std::uint64_t v, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    p[width - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

std::uint64_t load_be(const std::uint8_t* p, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = v << 8 | p[i];
  return v;
}

}  // namespace

const FieldInfo& field_info(FieldId id) {
  for (const auto& f : kFields) {
    if (f.id == id) return f;
  }
  throw std::invalid_argument("unknown field id");
}

std::span<const FieldInfo, kFieldCount> all_fields() { return kFields; }

const FieldInfo* field_by_oxm(std::uint8_t oxm_field) {
  for (const auto& f : kFields) {
    if (f.oxm_field == oxm_field) return &f;
  }
  return nullptr;
}

Bytes serialize_tuple(const HeaderTuple& t) {
  Bytes key(kMatchKeyWidth, 0);
  std::uint8_t* k = key.data();
  store_be(k + 0, t.in_port, 4);
  store_be(k + 4, t.eth_dst, 6);
  store_be(k + 10, t.eth_src, 6);
  store_be(k + 16, t.eth_type, 2);
  if (t.vlan_vid) store_be(k + 18, kVlanPresentBit | *t.vlan_vid, 2);
  if (t.vlan_pcp) k[20] = *t.vlan_pcp;
  if (t.ip_dscp) k[21] = *t.ip_dscp;
  if (t.ip_proto) k[22] = *t.ip_proto;
  if (t.mpls_tc) k[23] = *t.mpls_tc;
  if (t.mpls_label) store_be(k + 24, *t.mpls_label, 4);
  if (t.ipv4_src) store_be(k + 28, *t.ipv4_src, 4);
  if (t.ipv4_dst) store_be(k + 32, *t.ipv4_dst, 4);
  if (t.l4_src) store_be(k + 36, *t.l4_src, 2);
  if (t.l4_dst) store_be(k + 38, *t.l4_dst, 2);
  return key;
}

void apply_field(MaskedKey& key, FieldId field, std::uint64_t value,
                 std::optional<std::uint64_t> mask) {
  const FieldInfo& f = field_info(field);
  std::uint64_t m =
      mask.value_or(f.width == 8 ? ~0ull : (1ull << (8 * f.width)) - 1);
  Bytes vb(f.width), mb(f.width);
  store_be(vb.data(), value & m, f.width);
  store_be(mb.data(), m, f.width);
  apply_field_bytes(key, field, vb, mb);
}

void apply_field_bytes(MaskedKey& key, FieldId field, BytesView value,
                       BytesView mask) {
  const FieldInfo& f = field_info(field);
  if (value.size() != f.width || mask.size() != f.width) {
    throw std::invalid_argument("field width mismatch");
  }
  if (key.value.size() != kMatchKeyWidth) {
    throw std::invalid_argument("key width mismatch");
  }
  for (std::size_t i = 0; i < f.width; ++i) {
    key.value[f.key_offset + i] = value[i] & mask[i];
    key.mask[f.key_offset + i] = mask[i];
  }
}

std::pair<std::uint64_t, std::uint64_t> read_field(const MaskedKey& key,
                                                   FieldId field) {
  const FieldInfo& f = field_info(field);
  return {load_be(key.value.data() + f.key_offset, f.width),
          load_be(key.mask.data() + f.key_offset, f.width)};
}

}  // namespace flowfabric
