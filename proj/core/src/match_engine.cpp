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

#include "flowfabric/match_engine.hpp"

#include <bit>
#include <stdexcept>

namespace flowfabric {

MaskedKey MaskedKey::exact(Bytes v) {
  MaskedKey k;
  k.mask.assign(v.size(), 0xff);
  k.value = std::move(v);
  return k;
}

MaskedKey MaskedKey::wildcard(std::size_t width_bytes) {
  MaskedKey k;
  k.value.assign(width_bytes, 0);
  k.mask.assign(width_bytes, 0);
  return k;
}

bool MaskedKey::canonical() const {
  if (value.size() != mask.size()) return false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] & static_cast<std::uint8_t>(~mask[i])) return false;
  }
  return true;
}

bool MaskedKey::matches(BytesView key) const {
  if (key.size() != value.size()) return false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if ((key[i] & mask[i]) != value[i]) return false;
  }
  return true;
}

bool MaskedKey::subsumes(const MaskedKey& other) const {
  if (other.value.size() != value.size()) return false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    // Every care bit of this must be care in other, with equal value there.
    if ((mask[i] & other.mask[i]) != mask[i]) return false;
    if ((other.value[i] & mask[i]) != value[i]) return false;
  }
  return true;
}

TernaryMatcher::TernaryMatcher(std::size_t key_width_bytes,
                               std::size_t capacity)
    : key_width_(key_width_bytes),
      capacity_(capacity),
      words_per_row_((capacity + 63) / 64),
      banks_(key_width_bytes * kChunkAddresses * words_per_row_, 0),
      occupied_(words_per_row_, 0),
      priority_(capacity, 0),
      keys_(capacity) {
  if (key_width_bytes == 0 || capacity == 0) {
    throw std::invalid_argument("TernaryMatcher needs width and capacity > 0");
  }
}

std::span<std::uint64_t> TernaryMatcher::row(std::size_t chunk,
                                             std::size_t addr) {
  return {banks_.data() + (chunk * kChunkAddresses + addr) * words_per_row_,
          words_per_row_};
}

std::span<const std::uint64_t> TernaryMatcher::bank_row(
    std::size_t chunk, std::size_t addr) const {
  return {banks_.data() + (chunk * kChunkAddresses + addr) * words_per_row_,
          words_per_row_};
}

std::size_t TernaryMatcher::first_vacant() const {
  for (std::size_t w = 0; w < words_per_row_; ++w) {
    std::uint64_t free_bits = ~occupied_[w];
    if (w == words_per_row_ - 1 && capacity_ % 64 != 0) {
      free_bits &= (1ull << (capacity_ % 64)) - 1;
    }
    if (free_bits) return w * 64 + std::countr_zero(free_bits);
  }
  return capacity_;  // full
}

std::optional<MatchResult> TernaryMatcher::lookup(BytesView key) const {
  if (key.size() != key_width_) {
    throw std::invalid_argument("lookup key width mismatch");
  }
  if (occupied_count_ == 0) return std::nullopt;

  // AND-reduce one bank word per chunk into the match vector. Stack storage
  // keeps concurrent lookups independent.
  constexpr std::size_t kStackWords = 64;  // up to 4096 slots
  std::uint64_t stack_vec[kStackWords];
  std::vector<std::uint64_t> heap_vec;
  std::uint64_t* match_vec = stack_vec;
  if (words_per_row_ > kStackWords) {
    heap_vec.resize(words_per_row_);
    match_vec = heap_vec.data();
  }

  for (std::size_t w = 0; w < words_per_row_; ++w) match_vec[w] = occupied_[w];
  for (std::size_t chunk = 0; chunk < key_width_; ++chunk) {
    auto bank = bank_row(chunk, key[chunk]);
    bool any = false;
    for (std::size_t w = 0; w < words_per_row_; ++w) {
      match_vec[w] &= bank[w];
      any |= match_vec[w] != 0;
    }
    if (!any) return std::nullopt;
  }

  // Priority encoder: max priority wins, ties to the lowest slot index.
  std::optional<MatchResult> best;
  for (std::size_t w = 0; w < words_per_row_; ++w) {
    std::uint64_t bits = match_vec[w];
    while (bits) {
      std::size_t slot = w * 64 + std::countr_zero(bits);
      bits &= bits - 1;
      if (!best || priority_[slot] > best->priority) {
        best = MatchResult{slot, priority_[slot]};
      }
    }
  }
  return best;
}

std::optional<std::size_t> TernaryMatcher::insert(const MaskedKey& key,
                                                  std::uint32_t priority) {
  if (key.width() != key_width_) {
    throw std::invalid_argument("insert key width mismatch");
  }
  if (!key.canonical()) {
    throw std::invalid_argument("insert key not canonical (value & ~mask)");
  }
  std::size_t slot = first_vacant();
  if (slot >= capacity_) return std::nullopt;

  const std::uint64_t slot_bit = 1ull << (slot % 64);
  const std::size_t slot_word = slot / 64;
  for (std::size_t chunk = 0; chunk < key_width_; ++chunk) {
    const std::uint8_t v = key.value[chunk];
    const std::uint8_t free_mask = static_cast<std::uint8_t>(~key.mask[chunk]);
    // Enumerate every address compatible with (v, mask): v | sub for each
    // subset `sub` of the wildcard bits.
    std::uint8_t sub = free_mask;
    while (true) {
      row(chunk, v | sub)[slot_word] |= slot_bit;
      if (sub == 0) break;
      sub = static_cast<std::uint8_t>((sub - 1) & free_mask);
    }
  }

  occupied_[slot_word] |= slot_bit;
  ++occupied_count_;
  priority_[slot] = priority;
  keys_[slot] = key;
  return slot;
}

void TernaryMatcher::remove(std::size_t slot) {
  if (slot >= capacity_ || !slot_occupied(slot)) return;  // idempotent
  const MaskedKey& key = keys_[slot];
  const std::uint64_t slot_bit = 1ull << (slot % 64);
  const std::size_t slot_word = slot / 64;
  for (std::size_t chunk = 0; chunk < key_width_; ++chunk) {
    const std::uint8_t v = key.value[chunk];
    const std::uint8_t free_mask = static_cast<std::uint8_t>(~key.mask[chunk]);
    std::uint8_t sub = free_mask;
    while (true) {
      row(chunk, v | sub)[slot_word] &= ~slot_bit;
      if (sub == 0) break;
      sub = static_cast<std::uint8_t>((sub - 1) & free_mask);
    }
  }
  occupied_[slot_word] &= ~slot_bit;
  --occupied_count_;
  keys_[slot] = MaskedKey{};
  priority_[slot] = 0;
}

bool TernaryMatcher::slot_occupied(std::size_t slot) const {
  if (slot >= capacity_) return false;
  return (occupied_[slot / 64] >> (slot % 64)) & 1;
}

std::uint32_t TernaryMatcher::slot_priority(std::size_t slot) const {
  return priority_.at(slot);
}

const MaskedKey& TernaryMatcher::slot_key(std::size_t slot) const {
  return keys_.at(slot);
}

std::optional<MatchResult> oracle_lookup(std::span<const OracleEntry> entries,
                                         BytesView key) {
  std::optional<MatchResult> best;
  for (const auto& e : entries) {
    if (!e.key.matches(key)) continue;
    if (!best || e.priority > best->priority ||
        (e.priority == best->priority && e.slot < best->slot)) {
      best = MatchResult{e.slot, e.priority};
    }
  }
  return best;
}

}  // namespace flowfabric
