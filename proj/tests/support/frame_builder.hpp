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

// Layered frame constructor for parser tests. The builder lays out bytes from
// its own parameters and computes the expected tuple by offset arithmetic
// (14 + 4 per VLAN tag + 4 per MPLS label + 4*IHL), so it serves as the
// independent oracle the production parser is checked against.

#include <cstdint>
#include <optional>
#include <vector>

#include "flowfabric/bytes.hpp"
#include "flowfabric/wire_packet.hpp"

namespace flowfabric::testsupport {

struct L3Spec {
  std::uint8_t ihl = 5;  // words; legal range 5..15
  std::uint8_t dscp = 0;
  std::uint8_t ecn = 0;
  std::uint8_t ttl = 64;
  std::uint8_t proto = kIpProtoTcp;
  std::uint32_t src = 0x0a000001;
  std::uint32_t dst = 0x0a000002;
  // 0 = derive from payload; anything else is written verbatim (for
  // length-mismatch cases).
  std::uint16_t total_len_override = 0;
};

struct FrameSpec {
  std::uint64_t eth_dst = 0x001122334455;
  std::uint64_t eth_src = 0x665544332211;
  std::vector<std::uint16_t> vlan_tcis;    // outermost first
  std::vector<std::uint32_t> mpls_labels;  // label values, outermost first
  std::vector<std::uint8_t> mpls_tcs;      // parallel to labels (0 if short)
  bool mpls_omit_bottom = false;  // never set the S bit (overflow cases)
  std::optional<std::uint16_t> bare_ethertype;  // L2-only frame of this type
  std::optional<L3Spec> ipv4;
  std::uint16_t l4_src = 80;
  std::uint16_t l4_dst = 1024;
  std::size_t payload = 10;  // bytes after the last parsed header
};

inline Bytes build_frame(const FrameSpec& s) {
  Bytes f;
  auto push16 = [&](std::uint16_t v) {
    f.push_back(static_cast<std::uint8_t>(v >> 8));
    f.push_back(static_cast<std::uint8_t>(v));
  };
  auto push32 = [&](std::uint32_t v) {
    push16(static_cast<std::uint16_t>(v >> 16));
    push16(static_cast<std::uint16_t>(v));
  };
  auto push48 = [&](std::uint64_t v) {
    push16(static_cast<std::uint16_t>(v >> 32));
    push32(static_cast<std::uint32_t>(v));
  };

  push48(s.eth_dst);
  push48(s.eth_src);
  for (std::uint16_t tci : s.vlan_tcis) {
    push16(kEthTypeVlan);
    push16(tci);
  }
  if (!s.mpls_labels.empty()) {
    push16(kEthTypeMplsUnicast);
    for (std::size_t i = 0; i < s.mpls_labels.size(); ++i) {
      bool bottom = !s.mpls_omit_bottom && i + 1 == s.mpls_labels.size();
      std::uint8_t tc = i < s.mpls_tcs.size() ? s.mpls_tcs[i] : 0;
      std::uint32_t shim = (s.mpls_labels[i] & 0xfffff) << 12 |
                           static_cast<std::uint32_t>(tc & 0x7) << 9 |
                           (bottom ? 0x100u : 0u) | 63u;
      push32(shim);
    }
  } else if (s.bare_ethertype) {
    push16(*s.bare_ethertype);
  } else if (s.ipv4) {
    push16(kEthTypeIpv4);
  } else {
    push16(0x88b5);  // local experimental; ends parsing
  }

  if (s.ipv4) {
    const L3Spec& l3 = *s.ipv4;
    const std::size_t hdr_bytes = l3.ihl * 4;
    const std::size_t l4_bytes = l3.proto == kIpProtoTcp
                                     ? kTcpBaseHeaderBytes
                                     : (l3.proto == kIpProtoUdp
                                            ? kUdpHeaderBytes
                                            : 0);
    std::uint16_t total_len =
        l3.total_len_override
            ? l3.total_len_override
            : static_cast<std::uint16_t>(hdr_bytes + l4_bytes + s.payload);

    const std::size_t l3_at = f.size();
    f.push_back(static_cast<std::uint8_t>(0x40 | l3.ihl));
    f.push_back(static_cast<std::uint8_t>(l3.dscp << 2 | l3.ecn));
    push16(total_len);
    push32(0x00004000);  // id 0, DF
    f.push_back(l3.ttl);
    f.push_back(l3.proto);
    push16(0);  // checksum, patched below
    push32(l3.src);
    push32(l3.dst);
    while (f.size() < l3_at + hdr_bytes) f.push_back(0xab);  // options filler

    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < hdr_bytes; i += 2) {
      sum += load_be16(f.data() + l3_at + i);
    }
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    store_be16(f.data() + l3_at + 10, static_cast<std::uint16_t>(~sum));

    if (l3.proto == kIpProtoTcp) {
      push16(s.l4_src);
      push16(s.l4_dst);
      push32(0x1000);  // seq
      push32(0);       // ack
      f.push_back(0x50);  // data offset 5
      f.push_back(0x18);  // PSH|ACK
      push16(0xffff);
      push16(0);  // checksum (not validated by the parser graph)
      push16(0);  // urgent
    } else if (l3.proto == kIpProtoUdp) {
      push16(s.l4_src);
      push16(s.l4_dst);
      push16(static_cast<std::uint16_t>(kUdpHeaderBytes + s.payload));
      push16(0);
    }
  }

  for (std::size_t i = 0; i < s.payload; ++i) {
    f.push_back(static_cast<std::uint8_t>(0xc0 + i));
  }
  return f;
}

// Ground-truth tuple computed from the construction parameters alone.
inline HeaderTuple expected_tuple(const FrameSpec& s, std::uint32_t in_port) {
  HeaderTuple t;
  t.in_port = in_port;
  t.eth_dst = s.eth_dst;
  t.eth_src = s.eth_src;

  std::size_t header_len = 14 + 4 * s.vlan_tcis.size();
  if (!s.vlan_tcis.empty()) {
    t.vlan_vid = s.vlan_tcis.front() & 0x0fff;
    t.vlan_pcp = static_cast<std::uint8_t>(s.vlan_tcis.front() >> 13);
  }
  if (!s.mpls_labels.empty()) {
    t.eth_type = kEthTypeMplsUnicast;
    t.mpls_label = s.mpls_labels.front() & 0xfffff;
    t.mpls_tc = s.mpls_tcs.empty()
                    ? 0
                    : static_cast<std::uint8_t>(s.mpls_tcs.front() & 0x7);
    header_len += 4 * s.mpls_labels.size();
  } else if (s.bare_ethertype) {
    t.eth_type = *s.bare_ethertype;
  } else if (s.ipv4) {
    t.eth_type = kEthTypeIpv4;
  } else {
    t.eth_type = 0x88b5;
  }

  if (s.ipv4) {
    const L3Spec& l3 = *s.ipv4;
    t.ip_dscp = l3.dscp;
    t.ip_proto = l3.proto;
    t.ipv4_src = l3.src;
    t.ipv4_dst = l3.dst;
    header_len += 4ull * l3.ihl;
    if (l3.proto == kIpProtoTcp) {
      t.l4_src = s.l4_src;
      t.l4_dst = s.l4_dst;
      header_len += kTcpBaseHeaderBytes;
    } else if (l3.proto == kIpProtoUdp) {
      t.l4_src = s.l4_src;
      t.l4_dst = s.l4_dst;
      header_len += kUdpHeaderBytes;
    }
  }
  t.header_len = header_len;
  t.malicious = false;
  return t;
}

}  // namespace flowfabric::testsupport
