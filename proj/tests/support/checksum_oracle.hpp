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

// Independent RFC 1071 checker. Deliberately written differently from the
// production code: byte-wise accumulation into a wide register, deferred
// fold, and verification by summing over the checksum field itself (a valid
// header sums to 0xffff).

#include <cstdint>

#include "flowfabric/bytes.hpp"

namespace flowfabric::testsupport {

// Sums the full IPv4 header including the stored checksum; valid iff the
// one's-complement total is all-ones.
inline bool ipv4_checksum_valid(BytesView frame, std::size_t l3_offset) {
  if (l3_offset >= frame.size()) return false;
  std::size_t hdr = (frame[l3_offset] & 0x0f) * 4u;
  if (hdr < 20 || l3_offset + hdr > frame.size()) return false;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < hdr; ++i) {
    std::uint64_t byte = frame[l3_offset + i];
    total += (i % 2 == 0) ? byte << 8 : byte;
  }
  while (total >> 16) total = (total & 0xffff) + (total >> 16);
  return total == 0xffff;
}

// Locates the IPv4 header by walking EtherTypes (VLAN tags and MPLS labels),
// then validates. Frames without IPv4 count as valid.
inline bool frame_ipv4_checksum_valid(BytesView frame) {
  if (frame.size() < 14) return true;
  std::size_t off = 12;
  std::uint16_t et = load_be16(frame.data() + off);
  while ((et == 0x8100 || et == 0x88a8) && off + 6 <= frame.size()) {
    off += 4;
    et = load_be16(frame.data() + off);
  }
  off += 2;
  if (et == 0x8847 || et == 0x8848) {
    while (off + 4 <= frame.size()) {
      std::uint32_t shim = load_be32(frame.data() + off);
      off += 4;
      if (shim & 0x100) break;
    }
    if (off >= frame.size() || (frame[off] >> 4) != 4) return true;
  } else if (et != 0x0800) {
    return true;
  }
  return ipv4_checksum_valid(frame, off);
}

}  // namespace flowfabric::testsupport
