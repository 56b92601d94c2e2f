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

#include "flowfabric/traffic.hpp"

#include <stdexcept>

namespace flowfabric {

namespace {

void store_be48(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 6; ++i) {
    p[5 - i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
}

std::uint16_t ipv4_checksum(const std::uint8_t* hdr, std::size_t bytes) {
  std::uint32_t sum = 0;
  for (std::size_t i = 0; i + 1 < bytes; i += 2) {
    if (i == 10) continue;
    sum += load_be16(hdr + i);
  }
  while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
  return static_cast<std::uint16_t>(~sum);
}

}  // namespace

Bytes build_frame(const FrameTemplate& t, std::size_t frame_size,
                  std::mt19937_64& rng) {
  const std::size_t l2 = 14 + (t.vlan_vid ? 4 : 0);
  const std::size_t l4 =
      t.ip_proto == kIpProtoTcp ? kTcpBaseHeaderBytes : kUdpHeaderBytes;
  if (frame_size < l2 + 20 + l4 || frame_size > kMaxFrameBytes) {
    throw std::invalid_argument("frame size cannot carry the header stack");
  }

  Bytes f(frame_size, 0);
  store_be48(f.data(), t.eth_dst);
  store_be48(f.data() + 6, t.eth_src);
  std::size_t off = 12;
  if (t.vlan_vid) {
    store_be16(f.data() + off, kEthTypeVlan);
    store_be16(f.data() + off + 2,
               static_cast<std::uint16_t>(t.vlan_pcp << 13 |
                                          (*t.vlan_vid & 0x0fff)));
    off += 4;
  }
  store_be16(f.data() + off, kEthTypeIpv4);
  off += 2;

  const std::size_t l3 = off;
  const std::uint16_t total_len = static_cast<std::uint16_t>(frame_size - l3);
  f[l3] = 0x45;  // version 4, IHL 5
  f[l3 + 1] = static_cast<std::uint8_t>(t.ip_dscp << 2);
  store_be16(f.data() + l3 + 2, total_len);
  f[l3 + 8] = t.ip_ttl;
  f[l3 + 9] = t.ip_proto;
  store_be32(f.data() + l3 + 12, t.ipv4_src);
  store_be32(f.data() + l3 + 16, t.ipv4_dst);
  store_be16(f.data() + l3 + 10, ipv4_checksum(f.data() + l3, 20));

  const std::size_t l4_off = l3 + 20;
  store_be16(f.data() + l4_off, t.l4_src);
  store_be16(f.data() + l4_off + 2, t.l4_dst);
  std::size_t payload_off;
  if (t.ip_proto == kIpProtoTcp) {
    f[l4_off + 12] = 0x50;  // data offset 5 words
    payload_off = l4_off + kTcpBaseHeaderBytes;
  } else {
    store_be16(f.data() + l4_off + 4,
               static_cast<std::uint16_t>(frame_size - l4_off));
    payload_off = l4_off + kUdpHeaderBytes;
  }

  for (std::size_t i = payload_off; i < frame_size; ++i) {
    f[i] = static_cast<std::uint8_t>(rng());
  }
  return f;
}

TrafficGenerator::TrafficGenerator(const TrafficSpec& spec)
    : spec_(spec), rng_(spec.seed) {
  remaining_.reserve(spec.flows.size());
  for (const FlowTrafficSpec& f : spec.flows) {
    remaining_.push_back(f.packet_count);
    total_ += f.packet_count;
  }
}

std::optional<TrafficGenerator::Item> TrafficGenerator::next() {
  const std::size_t n = remaining_.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = (cursor_ + i) % n;
    if (remaining_[idx] == 0) continue;
    cursor_ = (idx + 1) % n;
    --remaining_[idx];
    ++generated_;
    const FlowTrafficSpec& f = spec_.flows[idx];
    return Item{f.ingress_port, build_frame(f.header, f.frame_size, rng_)};
  }
  return std::nullopt;
}

}  // namespace flowfabric
