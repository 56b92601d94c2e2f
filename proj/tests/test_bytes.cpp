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

#include "flowfabric/bytes.hpp"

#include <doctest.h>

using namespace flowfabric;

TEST_CASE("big-endian loads and stores agree") {
  std::uint8_t buf[8];
  store_be64(buf, 0x0123456789abcdefull);
  CHECK(buf[0] == 0x01);
  CHECK(buf[7] == 0xef);
  CHECK(load_be64(buf) == 0x0123456789abcdefull);
  CHECK(load_be32(buf) == 0x01234567u);
  CHECK(load_be16(buf) == 0x0123u);
}

TEST_CASE("reader is bounds-checked") {
  Bytes data = {1, 2, 3};
  BytesReader r(data);
  CHECK(r.u16() == 0x0102);
  CHECK_THROWS_AS(r.u16(), TruncatedRead);
  CHECK(r.u8() == 3);  // the failed read consumed nothing
  CHECK(r.empty());
}

TEST_CASE("writer padding and patching") {
  BytesWriter w;
  w.u16(0xbeef);
  w.pad_to(8);
  CHECK(w.size() == 8);
  w.u32(7);
  w.patch_u16(0, 0xcafe);
  Bytes out = w.take();
  CHECK(load_be16(out.data()) == 0xcafe);
  CHECK(out[2] == 0);
  CHECK(load_be32(out.data() + 8) == 7);
}

TEST_CASE("hex helpers round trip") {
  Bytes data = {0x00, 0xff, 0x42, 0x0a};
  CHECK(to_hex(data) == "00ff420a");
  CHECK(from_hex("00ff420a") == data);
  CHECK(from_hex("00 FF 42 0a") == data);
  CHECK(from_hex("0x00 0xff:0x42,0x0a") == data);
  CHECK_THROWS_AS(from_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}
