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
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "flowfabric/match_fields.hpp"
#include "flowfabric/time_util.hpp"
#include "flowfabric/wire_packet.hpp"

namespace flowfabric {

// Reserved OpenFlow port numbers the dataplane understands.
constexpr std::uint32_t kPortAll = 0xfffffffc;         // OFPP_ALL
constexpr std::uint32_t kPortController = 0xfffffffd;  // OFPP_CONTROLLER
constexpr std::uint32_t kPortAny = 0xffffffff;         // OFPP_ANY
constexpr std::uint32_t kPortMax = 0xffffff00;         // OFPP_MAX
constexpr std::uint16_t kControllerMaxLenNoBuffer = 0xffff;  // OFPCML_NO_BUFFER

constexpr std::uint32_t kNoBuffer = 0xffffffff;  // OFP_NO_BUFFER

struct Action {
  enum class Kind : std::uint8_t {
    kOutput,
    kPushVlan,
    kPopVlan,
    kPushMpls,
    kPopMpls,
    kSetField,
    kSetNwTtl,
    kDecNwTtl,
    kUnsupported,  // decoded but not executable; rejected at flow-mod time
  };

  Kind kind{};
  std::uint32_t port = 0;     // kOutput
  std::uint16_t max_len = 0;  // kOutput to CONTROLLER: payload cap
  std::uint16_t ethertype = 0;  // pushes and pop_mpls
  FieldId field{};            // kSetField
  Bytes set_value;            // kSetField payload, field width bytes
  std::uint8_t ttl = 0;       // kSetNwTtl
  std::uint16_t raw_type = 0;  // kUnsupported: wire action type
  Bytes raw_body;              // kUnsupported: body after type/len

  static Action output(std::uint32_t port,
                       std::uint16_t max_len = kControllerMaxLenNoBuffer);
  static Action push_vlan(std::uint16_t ethertype);
  static Action pop_vlan();
  static Action push_mpls(std::uint16_t ethertype);
  static Action pop_mpls(std::uint16_t ethertype);
  static Action set_field(FieldId field, std::uint64_t value);
  static Action set_field_bytes(FieldId field, Bytes value);
  static Action set_nw_ttl(std::uint8_t ttl);
  static Action dec_nw_ttl();

  bool operator==(const Action&) const = default;
};

// The accumulated action set of a pipeline walk: at most one action per
// type, one set-field per field. Writing an action of a type already present
// overwrites it.
struct ActionSet {
  bool pop_vlan = false;
  std::optional<std::uint16_t> pop_mpls_ethertype;
  std::optional<std::uint16_t> push_mpls_ethertype;
  std::optional<std::uint16_t> push_vlan_ethertype;
  std::optional<std::uint8_t> nw_ttl;
  bool dec_nw_ttl = false;
  std::map<FieldId, Bytes> set_fields;
  std::optional<Action> output_action;

  void write(const Action& a);
  void clear();
  bool empty() const;
  // Lowers the set into the fixed execution order: pops, pushes, TTL,
  // set-field, then output.
  std::vector<Action> to_ordered_list() const;

  bool operator==(const ActionSet&) const = default;
};

struct Emission {
  std::uint32_t port;  // physical port or kPortController
  Bytes frame;
};

// Per-disposition counters; together with the packet buffer gauge these
// account for every frame handed to the executor.
struct ExecCounters {
  std::atomic<std::uint64_t> emitted{0};        // (port, frame) pairs emitted
  std::atomic<std::uint64_t> dropped_empty{0};  // empty action set / no output
  std::atomic<std::uint64_t> dropped_ttl{0};    // dec_ttl at TTL <= 1
  std::atomic<std::uint64_t> skipped_actions{0};  // set/pop on absent header
};

// Executes action sets and lists against frames. Pure per call apart from
// the counters; thread-safe.
class ActionExecutor {
 public:
  explicit ActionExecutor(std::uint32_t port_count)
      : port_count_(port_count) {}

  // Canonical action-set execution. ALL fans out to every port except
  // ingress. Returns the emissions; empty means the frame was dropped.
  std::vector<Emission> execute(const RawFrame& frame,
                                const ActionSet& actions);

  // In-order execution of a controller action list (Packet-Out semantics):
  // modifications apply to the running frame copy, each output emits the
  // frame as it stands.
  std::vector<Emission> execute_list(const RawFrame& frame,
                                     std::span<const Action> actions);

  const ExecCounters& counters() const { return counters_; }
  std::uint32_t port_count() const { return port_count_; }

 private:
  std::uint32_t port_count_;
  ExecCounters counters_;
};

// Frame-editing primitives, exposed for tests.
namespace frame_edit {
bool push_vlan(Bytes& frame, std::uint16_t tpid);
bool pop_vlan(Bytes& frame);
bool push_mpls(Bytes& frame, std::uint16_t ethertype);
bool pop_mpls(Bytes& frame, std::uint16_t ethertype);
// Returns false when the field's header is absent from the frame.
bool set_field(Bytes& frame, FieldId field, BytesView value);
bool set_ipv4_ttl(Bytes& frame, std::uint8_t ttl);
// -1: no IPv4 header; 0: TTL expired (frame must be dropped); 1: decremented.
int dec_ipv4_ttl(Bytes& frame);
// Recomputes the IPv4 header checksum in place; returns the new checksum.
std::uint16_t refresh_ipv4_checksum(Bytes& frame);
}  // namespace frame_edit

struct BufferedPacket {
  RawFrame frame;
  std::uint8_t miss_table = 0;
  MonotonicNs buffered_at = 0;
};

// Bounded store for table-miss packets awaiting controller decisions.
// Thread-safe.
class PacketBuffer {
 public:
  explicit PacketBuffer(std::size_t capacity) : capacity_(capacity) {}

  // Stores the frame and returns a fresh buffer id, or nullopt when full
  // (the caller converts that to a drop and a NO_BUFFER Packet-In).
  std::optional<std::uint32_t> buffer(RawFrame frame, std::uint8_t miss_table,
                                      MonotonicNs now);

  // Removes and returns the slot; nullopt for unknown/expired ids.
  std::optional<BufferedPacket> release(std::uint32_t buffer_id);

  // Drops packets buffered before `now - ttl`; returns how many.
  std::size_t expire(MonotonicNs now, MonotonicNs ttl);

  std::size_t live() const;
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  mutable std::mutex mu_;
  std::map<std::uint32_t, BufferedPacket> slots_;
  std::uint32_t next_id_ = 1;
};

}  // namespace flowfabric
