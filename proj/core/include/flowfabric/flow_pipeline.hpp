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

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <variant>
#include <vector>

#include "flowfabric/action_engine.hpp"
#include "flowfabric/match_engine.hpp"
#include "flowfabric/match_fields.hpp"
#include "flowfabric/ofp_constants.hpp"
#include "flowfabric/time_util.hpp"
#include "flowfabric/wire_packet.hpp"

namespace flowfabric {

// The instruction subset the pipeline accepts: at most one goto-table, at
// most one write-actions block, optional clear. Clear applies before write.
// Apply-Actions is rejected upstream; this pipeline only accumulates an
// action set and hands it to the action engine once traversal ends.
struct InstructionSet {
  std::optional<std::uint8_t> goto_table;
  bool clear_actions = false;
  std::optional<std::vector<Action>> write_actions;

  bool operator==(const InstructionSet&) const = default;
};

struct FlowCounters {
  std::uint64_t packet_count = 0;
  std::uint64_t byte_count = 0;
  MonotonicNs installed_at = 0;

  bool operator==(const FlowCounters&) const = default;
};

struct TableCounters {
  std::uint64_t lookup_count = 0;
  std::uint64_t matched_count = 0;
  std::uint32_t active_entries = 0;

  bool operator==(const TableCounters&) const = default;
};

// One row of a flow table, in descriptor form (stats snapshots, flow-removed
// notifications, test assertions).
struct FlowEntry {
  MaskedKey match;  // over the fixed match-key layout
  std::uint16_t priority = 0;
  InstructionSet instructions;
  FlowCounters counters;
  std::uint64_t cookie = 0;
  std::uint16_t idle_timeout = 0;  // seconds, 0 = none
  std::uint16_t hard_timeout = 0;  // seconds, 0 = none
  std::uint16_t flags = 0;         // OFPFF_*
};

struct FlowModError {
  std::uint16_t err_type;
  std::uint16_t err_code;

  bool operator==(const FlowModError&) const = default;
};

struct FlowModRequest {
  std::uint8_t command = ofp::OFPFC_ADD;
  std::uint8_t table_id = 0;
  std::uint16_t priority = 0;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint64_t cookie = 0;
  std::uint64_t cookie_mask = 0;
  std::uint32_t buffer_id = kNoBuffer;
  std::uint32_t out_port = kPortAny;  // DELETE filter
  std::uint16_t flags = 0;
  MaskedKey match;  // canonical, kMatchKeyWidth wide
  InstructionSet instructions;
};

// process() outcomes. A miss is a result, not an error; its disposition
// (drop or send-to-controller) is the caller's policy.
struct PipelineForward {
  ActionSet actions;
  std::uint64_t cookie = 0;  // cookie of the last matched entry

  bool operator==(const PipelineForward&) const = default;
};
struct PipelineMiss {
  std::uint8_t table_id = 0;

  bool operator==(const PipelineMiss&) const = default;
};
struct PipelineMaliciousDrop {
  bool operator==(const PipelineMaliciousDrop&) const = default;
};
using PipelineResult =
    std::variant<PipelineForward, PipelineMiss, PipelineMaliciousDrop>;

struct FlowStatsRecord {
  std::uint8_t table_id = 0;
  std::uint16_t priority = 0;
  std::uint64_t cookie = 0;
  std::uint16_t idle_timeout = 0;
  std::uint16_t hard_timeout = 0;
  std::uint16_t flags = 0;
  std::uint32_t duration_sec = 0;
  std::uint32_t duration_nsec = 0;
  std::uint64_t packet_count = 0;
  std::uint64_t byte_count = 0;
  MaskedKey match;
  InstructionSet instructions;
};

struct TableStatsRecord {
  std::uint8_t table_id = 0;
  TableCounters counters;
};

struct FlowStatsFilter {
  std::uint8_t table_id = ofp::kTableAll;
  std::uint32_t out_port = kPortAny;
  std::uint64_t cookie = 0;
  std::uint64_t cookie_mask = 0;
  MaskedKey match = MaskedKey::wildcard(kMatchKeyWidth);
};

struct ExpiredFlow {
  std::uint8_t table_id = 0;
  std::uint8_t reason = ofp::OFPRR_IDLE_TIMEOUT;
  FlowEntry entry;
  MonotonicNs duration_ns = 0;
};

// The flow-match unit: an ordered array of flow tables over TernaryMatchers.
// Matching always starts at table 0 and propagates only through goto-table
// instructions to strictly higher table ids, so traversal terminates in at
// most table_count() steps.
//
// Concurrency: process() calls may run concurrently (shared lock per table,
// atomic counters); flow-mods, expiry and stats snapshots take exclusive
// access.
class Pipeline {
 public:
  struct Config {
    std::size_t table_count = 4;
    std::size_t table_capacity = 1024;
  };

  explicit Pipeline(const Config& config);

  std::size_t table_count() const { return tables_.size(); }
  std::size_t table_capacity() const { return config_.table_capacity; }

  // Walks the tables for one packet. Malicious tuples are dropped before any
  // table is touched and no counter moves. Otherwise every visited table's
  // lookup_count increments; each hit bumps matched_count plus the entry's
  // packet/byte counters and refreshes its idle-timeout clock.
  PipelineResult process(const HeaderTuple& tuple, std::size_t frame_len,
                         MonotonicNs now);

  // ADD/MODIFY/DELETE semantics per OpenFlow 1.3.1, with the forward-only
  // goto rule enforced on ADD and MODIFY.
  std::optional<FlowModError> apply_flow_mod(const FlowModRequest& request,
                                             MonotonicNs now);

  // Removes entries past their hard timeout (since install) or idle timeout
  // (since last hit) and returns them for flow-removed notification.
  std::vector<ExpiredFlow> expire_flows(MonotonicNs now);

  std::vector<FlowStatsRecord> collect_flow_stats(const FlowStatsFilter& f,
                                                  MonotonicNs now) const;
  std::vector<TableStatsRecord> collect_table_stats() const;

  // All live entries of one table, slot order. Test/diagnostic surface.
  std::vector<FlowEntry> table_entries(std::uint8_t table_id) const;

 private:
  struct EntryState {
    InstructionSet instructions;
    std::uint64_t cookie = 0;
    std::uint16_t idle_timeout = 0;
    std::uint16_t hard_timeout = 0;
    std::uint16_t flags = 0;
    MonotonicNs installed_at = 0;
    std::atomic<std::uint64_t> packets{0};
    std::atomic<std::uint64_t> bytes{0};
    std::atomic<MonotonicNs> last_hit{0};
  };

  struct Table {
    explicit Table(std::size_t capacity)
        : matcher(kMatchKeyWidth, capacity), entries(capacity) {}
    mutable std::shared_mutex mu;
    TernaryMatcher matcher;
    std::vector<EntryState> entries;
    std::atomic<std::uint64_t> lookup_count{0};
    std::atomic<std::uint64_t> matched_count{0};
  };

  // True when an output action to `port` exists in the entry's write-actions
  // (the OpenFlow out_port filter for DELETE and flow-stats requests).
  static bool entry_outputs_to(const EntryState& e, std::uint32_t port);

  FlowEntry snapshot_entry(const Table& t, std::size_t slot) const;

  Config config_;
  std::vector<std::unique_ptr<Table>> tables_;
};

}  // namespace flowfabric
