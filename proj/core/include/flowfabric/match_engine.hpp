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
#include <span>
#include <vector>

#include "flowfabric/bytes.hpp"

namespace flowfabric {

// Ternary match key: per-bit value/mask pair. Mask bit 1 = care. Canonical
// form requires value & ~mask == 0.
struct MaskedKey {
  Bytes value;
  Bytes mask;

  static MaskedKey exact(Bytes v);
  static MaskedKey wildcard(std::size_t width_bytes);

  std::size_t width() const { return value.size(); }
  bool canonical() const;
  // True iff `key` (a fully-specified bit vector) matches this value/mask.
  bool matches(BytesView key) const;
  // True iff every key matched by `other` is also matched by this (this is
  // equal or more general). Used for OpenFlow non-strict delete/modify.
  bool subsumes(const MaskedKey& other) const;

  bool operator==(const MaskedKey&) const = default;
};

struct MatchResult {
  std::size_t slot;
  std::uint32_t priority;

  bool operator==(const MatchResult&) const = default;
};

// Software emulation of the RAM-based CAM/TCAM: one bank of 2^8 bit-vector
// words per 8-bit key chunk. A stored entry occupies one slot; bit s of
// banks[chunk][addr] is set iff chunk value `addr` is compatible with slot
// s's value/mask restricted to that chunk. Lookup ANDs one word per chunk
// and picks the highest-priority surviving slot. An exact-match-only matcher
// (all masks all-ones) degenerates to the plain CAM; the ternary form is a
// strict generalization reached through wildcard write expansion.
//
// Concurrency: lookups may run concurrently with each other; insert/remove
// require exclusive access (single-writer / multi-reader contract).
class TernaryMatcher {
 public:
  static constexpr std::size_t kChunkBits = 8;
  static constexpr std::size_t kChunkAddresses = 1u << kChunkBits;

  TernaryMatcher(std::size_t key_width_bytes, std::size_t capacity);

  std::size_t key_width() const { return key_width_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t occupied_count() const { return occupied_count_; }

  // Match `key` against all occupied slots: one bank word per chunk,
  // AND-reduced, then max priority with ties to the lowest slot index (the
  // priority encoder). Returns nullopt when nothing matches.
  std::optional<MatchResult> lookup(BytesView key) const;

  // Stores the entry in the lowest vacant slot, expanding wildcard chunks to
  // every compatible bank address (exact chunk: 1 address; fully wildcarded
  // chunk: all 256). Returns nullopt when the matcher is full.
  // Pre: key is canonical and of key_width() bytes.
  std::optional<std::size_t> insert(const MaskedKey& key,
                                    std::uint32_t priority);

  // Clears every bank bit owned by `slot` and marks it vacant. No-op on a
  // vacant slot.
  void remove(std::size_t slot);

  bool slot_occupied(std::size_t slot) const;
  std::uint32_t slot_priority(std::size_t slot) const;
  const MaskedKey& slot_key(std::size_t slot) const;

  // One bank row: the occupancy bit-vector for (chunk, addr). Exposed for
  // consistency checks and differential tests.
  std::span<const std::uint64_t> bank_row(std::size_t chunk,
                                          std::size_t addr) const;
  std::size_t words_per_row() const { return words_per_row_; }

 private:
  std::span<std::uint64_t> row(std::size_t chunk, std::size_t addr);
  std::size_t first_vacant() const;

  std::size_t key_width_;
  std::size_t capacity_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> banks_;     // [chunk][addr][word], flattened
  std::vector<std::uint64_t> occupied_;  // slot occupancy bit-vector
  std::size_t occupied_count_ = 0;
  std::vector<std::uint32_t> priority_;
  std::vector<MaskedKey> keys_;
};

struct OracleEntry {
  MaskedKey key;
  std::uint32_t priority;
  std::size_t slot;
};

// Linear-scan reference lookup: max-priority match, ties broken by lowest
// slot. The differential-testing oracle for TernaryMatcher.
std::optional<MatchResult> oracle_lookup(std::span<const OracleEntry> entries,
                                         BytesView key);

}  // namespace flowfabric
