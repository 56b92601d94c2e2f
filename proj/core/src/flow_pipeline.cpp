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

#include "flowfabric/flow_pipeline.hpp"

#include <mutex>
#include <stdexcept>

namespace flowfabric {

Pipeline::Pipeline(const Config& config) : config_(config) {
  if (config.table_count == 0 || config.table_count > ofp::kTableMax + 1) {
    throw std::invalid_argument("pipeline needs 1..255 tables");
  }
  tables_.reserve(config.table_count);
  for (std::size_t i = 0; i < config.table_count; ++i) {
    tables_.push_back(std::make_unique<Table>(config.table_capacity));
  }
}

PipelineResult Pipeline::process(const HeaderTuple& tuple,
                                 std::size_t frame_len, MonotonicNs now) {
  if (tuple.malicious) return PipelineMaliciousDrop{};

  const Bytes key = serialize_tuple(tuple);
  ActionSet acc;
  std::uint64_t cookie = 0;
  std::size_t table_id = 0;

  while (true) {
    Table& t = *tables_[table_id];
    std::shared_lock lock(t.mu);
    t.lookup_count.fetch_add(1, std::memory_order_relaxed);

    auto hit = t.matcher.lookup(key);
    if (!hit) return PipelineMiss{static_cast<std::uint8_t>(table_id)};

    t.matched_count.fetch_add(1, std::memory_order_relaxed);
    EntryState& e = t.entries[hit->slot];
    e.packets.fetch_add(1, std::memory_order_relaxed);
    e.bytes.fetch_add(frame_len, std::memory_order_relaxed);
    e.last_hit.store(now, std::memory_order_relaxed);
    cookie = e.cookie;

    const InstructionSet& ins = e.instructions;
    if (ins.clear_actions) acc.clear();
    if (ins.write_actions) {
      for (const Action& a : *ins.write_actions) acc.write(a);
    }
    if (!ins.goto_table) break;
    table_id = *ins.goto_table;  // validated > current at flow-mod time
  }
  return PipelineForward{std::move(acc), cookie};
}

bool Pipeline::entry_outputs_to(const EntryState& e, std::uint32_t port) {
  if (port == kPortAny) return true;
  if (!e.instructions.write_actions) return false;
  for (const Action& a : *e.instructions.write_actions) {
    if (a.kind == Action::Kind::kOutput && a.port == port) return true;
  }
  return false;
}

FlowEntry Pipeline::snapshot_entry(const Table& t, std::size_t slot) const {
  const EntryState& e = t.entries[slot];
  FlowEntry out;
  out.match = t.matcher.slot_key(slot);
  out.priority = static_cast<std::uint16_t>(t.matcher.slot_priority(slot));
  out.instructions = e.instructions;
  out.cookie = e.cookie;
  out.idle_timeout = e.idle_timeout;
  out.hard_timeout = e.hard_timeout;
  out.flags = e.flags;
  out.counters.packet_count = e.packets.load(std::memory_order_relaxed);
  out.counters.byte_count = e.bytes.load(std::memory_order_relaxed);
  out.counters.installed_at = e.installed_at;
  return out;
}

std::optional<FlowModError> Pipeline::apply_flow_mod(
    const FlowModRequest& req, MonotonicNs now) {
  using ofp::FlowModFailedCode;

  const bool is_delete = req.command == ofp::OFPFC_DELETE ||
                         req.command == ofp::OFPFC_DELETE_STRICT;
  if (req.table_id >= tables_.size() &&
      !(is_delete && req.table_id == ofp::kTableAll)) {
    return FlowModError{ofp::OFPET_FLOW_MOD_FAILED, ofp::OFPFMFC_BAD_TABLE_ID};
  }
  if (!req.match.canonical() || req.match.width() != kMatchKeyWidth) {
    return FlowModError{ofp::OFPET_BAD_MATCH, ofp::OFPBMC_BAD_WILDCARDS};
  }

  auto cookie_hit = [&](const EntryState& e) {
    return (e.cookie & req.cookie_mask) == (req.cookie & req.cookie_mask);
  };

  switch (req.command) {
    case ofp::OFPFC_ADD: {
      // Forward-only pipe: a goto may only point at a strictly higher table.
      if (req.instructions.goto_table) {
        std::uint8_t target = *req.instructions.goto_table;
        if (target <= req.table_id || target >= tables_.size()) {
          return FlowModError{ofp::OFPET_BAD_INSTRUCTION,
                              ofp::OFPBIC_BAD_TABLE_ID};
        }
      }
      Table& t = *tables_[req.table_id];
      std::unique_lock lock(t.mu);

      // Replace an identical match+priority entry in place.
      std::uint64_t carry_packets = 0, carry_bytes = 0;
      for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
        if (!t.matcher.slot_occupied(s)) continue;
        if (t.matcher.slot_priority(s) == req.priority &&
            t.matcher.slot_key(s) == req.match) {
          if (!(req.flags & ofp::OFPFF_RESET_COUNTS)) {
            carry_packets = t.entries[s].packets.load();
            carry_bytes = t.entries[s].bytes.load();
          }
          t.matcher.remove(s);
          break;
        }
      }

      auto slot = t.matcher.insert(req.match, req.priority);
      if (!slot) {
        return FlowModError{ofp::OFPET_FLOW_MOD_FAILED,
                            ofp::OFPFMFC_TABLE_FULL};
      }
      EntryState& e = t.entries[*slot];
      e.instructions = req.instructions;
      e.cookie = req.cookie;
      e.idle_timeout = req.idle_timeout;
      e.hard_timeout = req.hard_timeout;
      e.flags = req.flags;
      e.installed_at = now;
      e.packets.store(carry_packets);
      e.bytes.store(carry_bytes);
      e.last_hit.store(now);
      return std::nullopt;
    }

    case ofp::OFPFC_MODIFY:
    case ofp::OFPFC_MODIFY_STRICT: {
      if (req.instructions.goto_table) {
        std::uint8_t target = *req.instructions.goto_table;
        if (target <= req.table_id || target >= tables_.size()) {
          return FlowModError{ofp::OFPET_BAD_INSTRUCTION,
                              ofp::OFPBIC_BAD_TABLE_ID};
        }
      }
      const bool strict = req.command == ofp::OFPFC_MODIFY_STRICT;
      Table& t = *tables_[req.table_id];
      std::unique_lock lock(t.mu);
      for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
        if (!t.matcher.slot_occupied(s)) continue;
        if (!cookie_hit(t.entries[s])) continue;
        bool selected =
            strict ? (t.matcher.slot_priority(s) == req.priority &&
                      t.matcher.slot_key(s) == req.match)
                   : req.match.subsumes(t.matcher.slot_key(s));
        if (!selected) continue;
        t.entries[s].instructions = req.instructions;
        if (req.flags & ofp::OFPFF_RESET_COUNTS) {
          t.entries[s].packets.store(0);
          t.entries[s].bytes.store(0);
        }
      }
      return std::nullopt;
    }

    case ofp::OFPFC_DELETE:
    case ofp::OFPFC_DELETE_STRICT: {
      const bool strict = req.command == ofp::OFPFC_DELETE_STRICT;
      std::size_t first = req.table_id == ofp::kTableAll ? 0 : req.table_id;
      std::size_t last =
          req.table_id == ofp::kTableAll ? tables_.size() - 1 : req.table_id;
      for (std::size_t ti = first; ti <= last; ++ti) {
        Table& t = *tables_[ti];
        std::unique_lock lock(t.mu);
        for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
          if (!t.matcher.slot_occupied(s)) continue;
          if (!cookie_hit(t.entries[s])) continue;
          if (!entry_outputs_to(t.entries[s], req.out_port)) continue;
          bool selected =
              strict ? (t.matcher.slot_priority(s) == req.priority &&
                        t.matcher.slot_key(s) == req.match)
                     : req.match.subsumes(t.matcher.slot_key(s));
          if (selected) t.matcher.remove(s);
        }
      }
      return std::nullopt;
    }

    default:
      return FlowModError{ofp::OFPET_FLOW_MOD_FAILED,
                          ofp::OFPFMFC_BAD_COMMAND};
  }
}

std::vector<ExpiredFlow> Pipeline::expire_flows(MonotonicNs now) {
  std::vector<ExpiredFlow> expired;
  for (std::size_t ti = 0; ti < tables_.size(); ++ti) {
    Table& t = *tables_[ti];
    std::unique_lock lock(t.mu);
    for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
      if (!t.matcher.slot_occupied(s)) continue;
      const EntryState& e = t.entries[s];
      std::optional<std::uint8_t> reason;
      if (e.hard_timeout != 0 &&
          now - e.installed_at >= e.hard_timeout * kNsPerSec) {
        reason = ofp::OFPRR_HARD_TIMEOUT;
      } else if (e.idle_timeout != 0 &&
                 now - e.last_hit.load() >= e.idle_timeout * kNsPerSec) {
        reason = ofp::OFPRR_IDLE_TIMEOUT;
      }
      if (!reason) continue;
      ExpiredFlow ex;
      ex.table_id = static_cast<std::uint8_t>(ti);
      ex.reason = *reason;
      ex.entry = snapshot_entry(t, s);
      ex.duration_ns = now - e.installed_at;
      expired.push_back(std::move(ex));
      t.matcher.remove(s);
    }
  }
  return expired;
}

std::vector<FlowStatsRecord> Pipeline::collect_flow_stats(
    const FlowStatsFilter& f, MonotonicNs now) const {
  std::vector<FlowStatsRecord> out;
  std::size_t first = f.table_id == ofp::kTableAll ? 0 : f.table_id;
  std::size_t last =
      f.table_id == ofp::kTableAll ? tables_.size() - 1 : f.table_id;
  if (first >= tables_.size()) return out;

  for (std::size_t ti = first; ti <= last; ++ti) {
    const Table& t = *tables_[ti];
    std::unique_lock lock(t.mu);
    for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
      if (!t.matcher.slot_occupied(s)) continue;
      const EntryState& e = t.entries[s];
      if ((e.cookie & f.cookie_mask) != (f.cookie & f.cookie_mask)) continue;
      if (!entry_outputs_to(e, f.out_port)) continue;
      if (!f.match.subsumes(t.matcher.slot_key(s))) continue;
      FlowStatsRecord r;
      r.table_id = static_cast<std::uint8_t>(ti);
      r.priority = static_cast<std::uint16_t>(t.matcher.slot_priority(s));
      r.cookie = e.cookie;
      r.idle_timeout = e.idle_timeout;
      r.hard_timeout = e.hard_timeout;
      r.flags = e.flags;
      r.duration_sec = duration_sec(e.installed_at, now);
      r.duration_nsec = duration_nsec_part(e.installed_at, now);
      r.packet_count = e.packets.load();
      r.byte_count = e.bytes.load();
      r.match = t.matcher.slot_key(s);
      r.instructions = e.instructions;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<TableStatsRecord> Pipeline::collect_table_stats() const {
  std::vector<TableStatsRecord> out;
  out.reserve(tables_.size());
  for (std::size_t ti = 0; ti < tables_.size(); ++ti) {
    const Table& t = *tables_[ti];
    std::unique_lock lock(t.mu);
    TableStatsRecord r;
    r.table_id = static_cast<std::uint8_t>(ti);
    r.counters.lookup_count = t.lookup_count.load();
    r.counters.matched_count = t.matched_count.load();
    r.counters.active_entries =
        static_cast<std::uint32_t>(t.matcher.occupied_count());
    out.push_back(r);
  }
  return out;
}

std::vector<FlowEntry> Pipeline::table_entries(std::uint8_t table_id) const {
  std::vector<FlowEntry> out;
  if (table_id >= tables_.size()) return out;
  const Table& t = *tables_[table_id];
  std::unique_lock lock(t.mu);
  for (std::size_t s = 0; s < t.matcher.capacity(); ++s) {
    if (t.matcher.slot_occupied(s)) out.push_back(snapshot_entry(t, s));
  }
  return out;
}

}  // namespace flowfabric
