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

#include <chrono>
#include <cstdint>

namespace flowfabric {

// Monotonic timestamp in nanoseconds. All dataplane and flow-timeout
// arithmetic uses this single clock domain.
using MonotonicNs = std::uint64_t;

inline MonotonicNs now_monotonic_ns() {
  return static_cast<MonotonicNs>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now().time_since_epoch())
          .count());
}

constexpr MonotonicNs kNsPerSec = 1'000'000'000ull;
constexpr MonotonicNs kNsPerMs = 1'000'000ull;

inline std::uint32_t duration_sec(MonotonicNs from, MonotonicNs to) {
  return static_cast<std::uint32_t>((to - from) / kNsPerSec);
}

inline std::uint32_t duration_nsec_part(MonotonicNs from, MonotonicNs to) {
  return static_cast<std::uint32_t>((to - from) % kNsPerSec);
}

}  // namespace flowfabric
