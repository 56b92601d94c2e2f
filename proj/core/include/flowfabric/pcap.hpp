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
#include <variant>
#include <vector>

#include "flowfabric/bytes.hpp"

namespace flowfabric {

// Classic pcap, Ethernet link type. Both byte orders and both timestamp
// resolutions (usec 0xa1b2c3d4, nsec 0xa1b23c4d) are accepted.

struct PcapRecord {
  std::uint64_t ts_ns = 0;
  Bytes data;
};

struct PcapError {
  std::string message;
  std::size_t offset = 0;  // byte offset of the defect in the file
};

struct PcapContents {
  std::vector<PcapRecord> records;
  std::uint32_t link_type = 1;  // LINKTYPE_ETHERNET
  // Set when the file ends mid-record; the records read up to that point
  // are still delivered.
  std::optional<PcapError> truncated;
};

// Bad magic or a short global header yields PcapError with nothing read.
std::variant<PcapContents, PcapError> read_pcap(const std::string& path);
std::variant<PcapContents, PcapError> parse_pcap(BytesView bytes);

// Microsecond-resolution classic pcap, big-endian fields.
Bytes serialize_pcap(const std::vector<PcapRecord>& records);
void write_pcap(const std::string& path,
                const std::vector<PcapRecord>& records);

// Streaming per-port capture sink.
class PcapWriter {
 public:
  explicit PcapWriter(const std::string& path);
  ~PcapWriter();
  void append(std::uint64_t ts_ns, BytesView frame);
  std::size_t written() const { return written_; }

 private:
  int fd_ = -1;
  std::size_t written_ = 0;
};

}  // namespace flowfabric
