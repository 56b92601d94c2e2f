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

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>

#include "flowfabric/ofp_messages.hpp"

namespace flowfabric::ofp {

// Outbound arbitration classes, strict priority in this order. Under
// sustained Packet-In pressure the lower classes starve; that is the
// specified behavior of the strict-priority arbiter, not a defect.
enum class OutboundClass : std::uint8_t {
  kPacketIn = 0,
  kStatistics = 1,
  kSwitchInfo = 2,   // switch information and configuration
  kKeepalive = 3,    // channel setup and keep-alive
};

constexpr std::size_t kOutboundClassCount = 4;

OutboundClass classify_outbound(const MessageBody& body);

// Pending controller-bound messages, four priority classes, FIFO within a
// class. Enqueued from dataplane threads, drained by the channel writer;
// this is the only cross-thread surface and is safe under that contract.
class OutboundQueue {
 public:
  explicit OutboundQueue(std::size_t per_class_capacity = 4096)
      : capacity_(per_class_capacity) {}

  // False when the class queue is full; the message is dropped and counted.
  bool enqueue(OfpMessage msg);

  // The oldest message of the highest-priority non-empty class.
  std::optional<OfpMessage> dequeue();

  // Blocking dequeue with timeout, for the channel writer thread.
  std::optional<OfpMessage> wait_dequeue(std::chrono::milliseconds timeout);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::uint64_t dropped() const;

 private:
  std::optional<OfpMessage> dequeue_locked();

  std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::array<std::deque<OfpMessage>, kOutboundClassCount> classes_;
  std::uint64_t dropped_ = 0;
};

}  // namespace flowfabric::ofp
