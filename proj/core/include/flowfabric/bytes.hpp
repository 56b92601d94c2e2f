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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowfabric {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

// Thrown by BytesReader when a read runs past the end of the buffer.
// Wire decoders catch this and map it to a framing/decode error.
class TruncatedRead : public std::runtime_error {
 public:
  explicit TruncatedRead(std::size_t offset)
      : std::runtime_error("read past end of buffer at offset " +
                           std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

inline std::uint16_t load_be16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0]) << 8 | p[1];
}

inline std::uint32_t load_be32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) << 24 |
         static_cast<std::uint32_t>(p[1]) << 16 |
         static_cast<std::uint32_t>(p[2]) << 8 | p[3];
}

inline std::uint64_t load_be64(const std::uint8_t* p) {
  return static_cast<std::uint64_t>(load_be32(p)) << 32 | load_be32(p + 4);
}

inline void store_be16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 8);
  p[1] = static_cast<std::uint8_t>(v);
}

inline void store_be32(std::uint8_t* p, std::uint32_t v) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

inline void store_be64(std::uint8_t* p, std::uint64_t v) {
  store_be32(p, static_cast<std::uint32_t>(v >> 32));
  store_be32(p + 4, static_cast<std::uint32_t>(v));
}

// Cursor over a read-only byte buffer. Every read is bounds-checked.
class BytesReader {
 public:
  explicit BytesReader(BytesView data) : data_(data) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool empty() const { return remaining() == 0; }

  void require(std::size_t n) const {
    if (remaining() < n) throw TruncatedRead(pos_);
  }

  std::uint8_t u8() {
    require(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    require(2);
    auto v = load_be16(data_.data() + pos_);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    require(4);
    auto v = load_be32(data_.data() + pos_);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    require(8);
    auto v = load_be64(data_.data() + pos_);
    pos_ += 8;
    return v;
  }
  BytesView bytes(std::size_t n) {
    require(n);
    auto v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  void skip(std::size_t n) {
    require(n);
    pos_ += n;
  }
  // Rest of the buffer, consuming it.
  BytesView rest() { return bytes(remaining()); }

 private:
  BytesView data_;
  std::size_t pos_ = 0;
};

// Append-only big-endian writer backed by a growable vector.
class BytesWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) {
    out_.resize(out_.size() + 2);
    store_be16(out_.data() + out_.size() - 2, v);
  }
  void u32(std::uint32_t v) {
    out_.resize(out_.size() + 4);
    store_be32(out_.data() + out_.size() - 4, v);
  }
  void u64(std::uint64_t v) {
    out_.resize(out_.size() + 8);
    store_be64(out_.data() + out_.size() - 8, v);
  }
  void bytes(BytesView v) { out_.insert(out_.end(), v.begin(), v.end()); }
  void pad(std::size_t n) { out_.resize(out_.size() + n, 0); }
  // Zero padding up to the next multiple of `align` (relative to offset 0).
  void pad_to(std::size_t align) {
    std::size_t rem = out_.size() % align;
    if (rem != 0) pad(align - rem);
  }
  void patch_u16(std::size_t offset, std::uint16_t v) {
    store_be16(out_.data() + offset, v);
  }

  std::size_t size() const { return out_.size(); }
  const Bytes& data() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

inline std::string to_hex(BytesView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

// Accepts whitespace, ':' separators and "0x" prefixes between octets.
inline Bytes from_hex(const std::string& text) {
  Bytes out;
  int hi = -1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == ' ' || c == '\n' || c == '\t' || c == ':' || c == ',') continue;
    if (c == '0' && i + 1 < text.size() &&
        (text[i + 1] == 'x' || text[i + 1] == 'X') && hi < 0) {
      ++i;
      continue;
    }
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw std::invalid_argument("invalid hex character");
    }
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>(hi << 4 | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw std::invalid_argument("odd number of hex digits");
  return out;
}

}  // namespace flowfabric
