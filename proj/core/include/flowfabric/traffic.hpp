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
#include <random>
#include <vector>

#include "flowfabric/bytes.hpp"
#include "flowfabric/wire_packet.hpp"

namespace flowfabric {

// Header template a generated flow stamps onto every frame.
struct FrameTemplate {
  std::uint64_t eth_dst = 0x0a0b0c0d0e0f;
  std::uint64_t eth_src = 0x020406080a0c;
  std::optional<std::uint16_t> vlan_vid;
  std::uint8_t vlan_pcp = 0;
  std::uint8_t ip_proto = kIpProtoUdp;  // TCP or UDP
  std::uint32_t ipv4_src = 0x0a000001;  // 10.0.0.1
  std::uint32_t ipv4_dst = 0x0a000002;  // 10.0.0.2
  std::uint8_t ip_dscp = 0;
  std::uint8_t ip_ttl = 64;
  std::uint16_t l4_src = 1024;
  std::uint16_t l4_dst = 80;
};

struct FlowTrafficSpec {
  FrameTemplate header;
  std::uint64_t packet_count = 1;
  std::size_t frame_size = 64;  // whole frame, [64, 9216]
  std::uint32_t ingress_port = 0;
};

struct TrafficSpec {
  std::vector<FlowTrafficSpec> flows;
  std::uint64_t seed = 1;
  double rate_pps = 0;  // 0 = unlimited
};

// A complete Ethernet/IPv4/L4 frame of exactly `frame_size` bytes with a
// correct total-length field and header checksum; the payload is filled from
// `rng` so generation is deterministic for a fixed seed.
Bytes build_frame(const FrameTemplate& t, std::size_t frame_size,
                  std::mt19937_64& rng);

// Round-robins across flows until every flow's packet budget is spent.
class TrafficGenerator {
 public:
  explicit TrafficGenerator(const TrafficSpec& spec);

  struct Item {
    std::uint32_t ingress_port;
    Bytes frame;
  };
  std::optional<Item> next();

  std::uint64_t total() const { return total_; }
  std::uint64_t generated() const { return generated_; }

 private:
  TrafficSpec spec_;
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> remaining_;
  std::size_t cursor_ = 0;
  std::uint64_t total_ = 0;
  std::uint64_t generated_ = 0;
};

}  // namespace flowfabric
