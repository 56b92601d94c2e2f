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

#include "flowfabric/pcap.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace flowfabric {

namespace {

constexpr std::uint32_t kMagicUsec = 0xa1b2c3d4;
constexpr std::uint32_t kMagicUsecSwapped = 0xd4c3b2a1;
constexpr std::uint32_t kMagicNsec = 0xa1b23c4d;
constexpr std::uint32_t kMagicNsecSwapped = 0x4d3cb2a1;

std::uint32_t load_u32(const std::uint8_t* p, bool swapped) {
  if (swapped) {
    return static_cast<std::uint32_t>(p[3]) << 24 |
           static_cast<std::uint32_t>(p[2]) << 16 |
           static_cast<std::uint32_t>(p[1]) << 8 | p[0];
  }
  return load_be32(p);
}

}  // namespace

std::variant<PcapContents, PcapError> parse_pcap(BytesView bytes) {
  if (bytes.size() < 24) {
    return PcapError{"file shorter than the 24-byte pcap global header", 0};
  }
  const std::uint32_t magic = load_be32(bytes.data());
  bool swapped;
  std::uint64_t frac_to_ns;
  switch (magic) {
    case kMagicUsec:
      swapped = false;
      frac_to_ns = 1000;
      break;
    case kMagicUsecSwapped:
      swapped = true;
      frac_to_ns = 1000;
      break;
    case kMagicNsec:
      swapped = false;
      frac_to_ns = 1;
      break;
    case kMagicNsecSwapped:
      swapped = true;
      frac_to_ns = 1;
      break;
    default:
      return PcapError{"bad pcap magic", 0};
  }

  PcapContents out;
  out.link_type = load_u32(bytes.data() + 20, swapped);

  std::size_t off = 24;
  while (off < bytes.size()) {
    if (off + 16 > bytes.size()) {
      out.truncated = PcapError{"truncated record header", off};
      return out;
    }
    std::uint32_t ts_sec = load_u32(bytes.data() + off, swapped);
    std::uint32_t ts_frac = load_u32(bytes.data() + off + 4, swapped);
    std::uint32_t incl_len = load_u32(bytes.data() + off + 8, swapped);
    off += 16;
    if (off + incl_len > bytes.size()) {
      out.truncated = PcapError{"truncated record body", off - 16};
      return out;
    }
    PcapRecord rec;
    rec.ts_ns = static_cast<std::uint64_t>(ts_sec) * 1'000'000'000ull +
                static_cast<std::uint64_t>(ts_frac) * frac_to_ns;
    rec.data.assign(bytes.begin() + off, bytes.begin() + off + incl_len);
    out.records.push_back(std::move(rec));
    off += incl_len;
  }
  return out;
}

std::variant<PcapContents, PcapError> read_pcap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return PcapError{"cannot open file: " + path, 0};
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  return parse_pcap(bytes);
}

Bytes serialize_pcap(const std::vector<PcapRecord>& records) {
  BytesWriter w;
  w.u32(kMagicUsec);
  w.u16(2);   // version major
  w.u16(4);   // version minor
  w.u32(0);   // thiszone
  w.u32(0);   // sigfigs
  w.u32(65535);  // snaplen
  w.u32(1);   // LINKTYPE_ETHERNET
  for (const PcapRecord& r : records) {
    w.u32(static_cast<std::uint32_t>(r.ts_ns / 1'000'000'000ull));
    w.u32(static_cast<std::uint32_t>(r.ts_ns % 1'000'000'000ull / 1000));
    w.u32(static_cast<std::uint32_t>(r.data.size()));
    w.u32(static_cast<std::uint32_t>(r.data.size()));
    w.bytes(r.data);
  }
  return w.take();
}

void write_pcap(const std::string& path,
                const std::vector<PcapRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write pcap file: " + path);
  Bytes bytes = serialize_pcap(records);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

PcapWriter::PcapWriter(const std::string& path) {
  fd_ = ::open(path.c_str(), O_CREAT | O_TRUNC | O_WRONLY, 0644);
  if (fd_ < 0) throw std::runtime_error("cannot open pcap sink: " + path);
  Bytes header = serialize_pcap({});
  if (::write(fd_, header.data(), header.size()) !=
      static_cast<ssize_t>(header.size())) {
    throw std::runtime_error("cannot write pcap header: " + path);
  }
}

PcapWriter::~PcapWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void PcapWriter::append(std::uint64_t ts_ns, BytesView frame) {
  BytesWriter w;
  w.u32(static_cast<std::uint32_t>(ts_ns / 1'000'000'000ull));
  w.u32(static_cast<std::uint32_t>(ts_ns % 1'000'000'000ull / 1000));
  w.u32(static_cast<std::uint32_t>(frame.size()));
  w.u32(static_cast<std::uint32_t>(frame.size()));
  w.bytes(frame);
  const Bytes& rec = w.data();
  if (::write(fd_, rec.data(), rec.size()) !=
      static_cast<ssize_t>(rec.size())) {
    throw std::runtime_error("pcap sink write failed");
  }
  ++written_;
}

}  // namespace flowfabric
