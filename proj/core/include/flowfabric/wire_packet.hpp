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
#include <string>
#include <vector>

#include "flowfabric/bytes.hpp"
#include "flowfabric/time_util.hpp"

namespace flowfabric {

// A frame as admitted by an ingress port: raw octets plus arrival metadata.
struct RawFrame {
  std::uint32_t ingress_port = 0;
  Bytes data;
  MonotonicNs arrived_at = 0;
};

constexpr std::size_t kMinFrameBytes = 14;    // full Ethernet header
constexpr std::size_t kMaxFrameBytes = 9216;  // jumbo ceiling

// Header parser limits. The parser graph is fixed at build time:
// Ethernet -> 802.1Q (up to kMaxVlanTags) -> MPLS (up to kMaxMplsLabels)
// -> IPv4 -> TCP | UDP.
constexpr int kMaxVlanTags = 2;
constexpr int kMaxMplsLabels = 4;

constexpr std::uint16_t kEthTypeVlan = 0x8100;
constexpr std::uint16_t kEthTypeQinQ = 0x88a8;
constexpr std::uint16_t kEthTypeIpv4 = 0x0800;
constexpr std::uint16_t kEthTypeMplsUnicast = 0x8847;
constexpr std::uint16_t kEthTypeMplsMulticast = 0x8848;

constexpr std::uint8_t kIpProtoTcp = 6;
constexpr std::uint8_t kIpProtoUdp = 17;

// The parser extracts port numbers only; TCP options are never walked, so the
// TCP extractor consumes the 20-byte base header as a constant-length window.
constexpr std::size_t kTcpBaseHeaderBytes = 20;
constexpr std::size_t kUdpHeaderBytes = 8;
constexpr std::size_t kIpv4MinIhl = 5;

// Structural violations the parser can detect. A frame exhibiting any of
// these is flagged malicious and dropped before it reaches the flow tables.
enum class ViolationKind : std::uint8_t {
  kIhlTooSmall,        // IPv4 IHL field below the 5-word minimum
  kLengthExceedsFrame, // declared IPv4 total length runs past the frame end
  kTruncatedHeader,    // the parser graph needs bytes past the frame end
  kMplsStackOverflow,  // more than kMaxMplsLabels labels, none bottom-of-stack
};

struct Violation {
  ViolationKind kind;
  std::size_t offset = 0;  // byte offset of the offending header

  bool operator==(const Violation&) const = default;
};

std::string to_string(ViolationKind kind);

// The match-field vector handed to the flow pipeline. Optional fields are
// present iff the parser graph reached the header that carries them. Only the
// outermost VLAN tag and MPLS label populate the tuple; inner ones are parsed
// for offset correctness only.
struct HeaderTuple {
  std::uint32_t in_port = 0;
  std::uint64_t eth_dst = 0;  // low 48 bits
  std::uint64_t eth_src = 0;  // low 48 bits
  std::uint16_t eth_type = 0; // first EtherType after any VLAN tags
  std::optional<std::uint16_t> vlan_vid;  // 12-bit
  std::optional<std::uint8_t> vlan_pcp;   // 3-bit
  std::optional<std::uint32_t> mpls_label;  // 20-bit
  std::optional<std::uint8_t> mpls_tc;      // 3-bit
  std::optional<std::uint8_t> ip_proto;
  std::optional<std::uint32_t> ipv4_src;
  std::optional<std::uint32_t> ipv4_dst;
  std::optional<std::uint8_t> ip_dscp;  // 6-bit
  std::optional<std::uint16_t> l4_src;
  std::optional<std::uint16_t> l4_dst;
  bool malicious = false;
  std::size_t header_len = 0;  // bytes consumed by all parsed headers

  bool operator==(const HeaderTuple&) const = default;
};

struct ParseOutcome {
  HeaderTuple tuple;
  std::vector<Violation> violations;
};

// Single-pass header extraction over the fixed parser graph. Branch selection
// is driven by EtherType and the IPv4 Protocol field; the IPv4 payload offset
// comes from IHL. Unknown EtherTypes terminate parsing with an L2-only tuple
// and malicious=false; structural contradictions set malicious=true.
// Pure function of frame.data and frame.ingress_port.
ParseOutcome parse_with_reasons(const RawFrame& frame);

HeaderTuple parse(const RawFrame& frame);

// Every structural violation found in the frame; empty iff parse() yields
// malicious=false.
std::vector<Violation> malicious_reasons(const RawFrame& frame);

}  // namespace flowfabric
