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

#include "flowfabric/wire_packet.hpp"

namespace flowfabric {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kIhlTooSmall:
      return "ihl-too-small";
    case ViolationKind::kLengthExceedsFrame:
      return "length-exceeds-frame";
    case ViolationKind::kTruncatedHeader:
      return "truncated-header";
    case ViolationKind::kMplsStackOverflow:
      return "mpls-stack-overflow";
  }
  return "unknown";
}

namespace {

bool is_vlan_tpid(std::uint16_t et) {
  return et == kEthTypeVlan || et == kEthTypeQinQ;
}

bool is_mpls_ethertype(std::uint16_t et) {
  return et == kEthTypeMplsUnicast || et == kEthTypeMplsMulticast;
}

}  // namespace

ParseOutcome parse_with_reasons(const RawFrame& frame) {
  ParseOutcome out;
  HeaderTuple& t = out.tuple;
  const std::uint8_t* d = frame.data.data();
  const std::size_t len = frame.data.size();

  t.in_port = frame.ingress_port;

  auto have = [&](std::size_t off, std::size_t n) { return off + n <= len; };
  auto flag = [&](ViolationKind k, std::size_t off) {
    out.violations.push_back({k, off});
  };

  if (!have(0, kMinFrameBytes)) {
    // Below the RawFrame admission floor; treat as a truncated Ethernet header
    // rather than crashing on hostile input.
    flag(ViolationKind::kTruncatedHeader, 0);
    t.malicious = true;
    return out;
  }

  t.eth_dst = static_cast<std::uint64_t>(load_be32(d)) << 16 | load_be16(d + 4);
  t.eth_src =
      static_cast<std::uint64_t>(load_be32(d + 6)) << 16 | load_be16(d + 10);

  std::size_t off = 12;  // at the first EtherType field
  std::uint16_t et = load_be16(d + off);
  off += 2;
  t.eth_type = et;

  // 802.1Q tags. The outermost tag's VID/PCP go into the tuple; eth_type ends
  // up as the first EtherType after the tag stack (OpenFlow match semantics).
  int vlan_count = 0;
  while (is_vlan_tpid(et) && vlan_count < kMaxVlanTags) {
    if (!have(off, 4)) {
      flag(ViolationKind::kTruncatedHeader, off);
      goto done;
    }
    std::uint16_t tci = load_be16(d + off);
    if (vlan_count == 0) {
      t.vlan_vid = tci & 0x0fff;
      t.vlan_pcp = static_cast<std::uint8_t>(tci >> 13);
    }
    et = load_be16(d + off + 2);
    off += 4;
    ++vlan_count;
    t.eth_type = et;
  }
  if (is_vlan_tpid(et)) goto done;  // tag stack deeper than the graph supports

  if (is_mpls_ethertype(et)) {
    int labels = 0;
    bool bottom = false;
    while (!bottom) {
      if (labels == kMaxMplsLabels) {
        flag(ViolationKind::kMplsStackOverflow, off);
        goto done;
      }
      if (!have(off, 4)) {
        flag(ViolationKind::kTruncatedHeader, off);
        goto done;
      }
      std::uint32_t shim = load_be32(d + off);
      if (labels == 0) {
        t.mpls_label = shim >> 12;
        t.mpls_tc = static_cast<std::uint8_t>((shim >> 9) & 0x7);
      }
      bottom = (shim & 0x100) != 0;
      off += 4;
      ++labels;
    }
    // The graph expects a payload after the bottom of stack; classify it by
    // the IP version nibble. Anything other than IPv4 ends parsing cleanly.
    if (!have(off, 1)) {
      flag(ViolationKind::kTruncatedHeader, off);
      goto done;
    }
    if ((d[off] >> 4) != 4) goto done;
  } else if (et != kEthTypeIpv4) {
    goto done;  // unknown EtherType: L2(+tag) tuple only
  }

  // IPv4.
  {
    const std::size_t l3 = off;
    if (!have(l3, 1)) {
      flag(ViolationKind::kTruncatedHeader, l3);
      goto done;
    }
    const std::size_t ihl = d[l3] & 0x0f;
    if (ihl < kIpv4MinIhl) {
      flag(ViolationKind::kIhlTooSmall, l3);
      goto done;
    }
    const std::size_t l3_bytes = ihl * 4;
    if (!have(l3, l3_bytes)) {
      flag(ViolationKind::kTruncatedHeader, l3);
      goto done;
    }
    const std::uint16_t total_len = load_be16(d + l3 + 2);
    if (total_len > len - l3) flag(ViolationKind::kLengthExceedsFrame, l3);

    t.ip_dscp = static_cast<std::uint8_t>(d[l3 + 1] >> 2);
    t.ip_proto = d[l3 + 9];
    t.ipv4_src = load_be32(d + l3 + 12);
    t.ipv4_dst = load_be32(d + l3 + 16);
    off = l3 + l3_bytes;

    const std::size_t l4 = off;
    if (*t.ip_proto == kIpProtoTcp) {
      if (!have(l4, kTcpBaseHeaderBytes)) {
        flag(ViolationKind::kTruncatedHeader, l4);
        goto done;
      }
      t.l4_src = load_be16(d + l4);
      t.l4_dst = load_be16(d + l4 + 2);
      off = l4 + kTcpBaseHeaderBytes;
    } else if (*t.ip_proto == kIpProtoUdp) {
      if (!have(l4, kUdpHeaderBytes)) {
        flag(ViolationKind::kTruncatedHeader, l4);
        goto done;
      }
      t.l4_src = load_be16(d + l4);
      t.l4_dst = load_be16(d + l4 + 2);
      off = l4 + kUdpHeaderBytes;
    }
  }

done:
  t.header_len = off > len ? len : off;
  t.malicious = !out.violations.empty();
  return out;
}

HeaderTuple parse(const RawFrame& frame) {
  return parse_with_reasons(frame).tuple;
}

std::vector<Violation> malicious_reasons(const RawFrame& frame) {
  return parse_with_reasons(frame).violations;
}

}  // namespace flowfabric
