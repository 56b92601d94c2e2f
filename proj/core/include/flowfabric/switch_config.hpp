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
#include <map>
#include <string>
#include <vector>

#include "flowfabric/time_util.hpp"

namespace flowfabric {

enum class MissPolicy : std::uint8_t {
  kController,  // buffer + Packet-In (OpenFlow table-miss convention)
  kDrop,
};

enum class ArbiterPolicy : std::uint8_t {
  kLongestQueue,  // greatest occupancy, round-robin tie-break
  kRoundRobin,
};

// Switch geometry and runtime knobs. Defaults mirror the 8-port instance:
// 8 ports, 1024-frame queues, 4 flow tables of 1024 entries, 256 buffer
// slots.
struct SwitchConfig {
  std::uint32_t port_count = 8;
  std::size_t input_queue_capacity = 1024;
  std::size_t output_queue_capacity = 1024;
  std::size_t table_count = 4;
  std::size_t table_capacity = 1024;
  std::size_t packet_buffer_capacity = 256;

  MissPolicy default_miss_policy = MissPolicy::kController;
  std::map<std::size_t, MissPolicy> table_miss_policy;  // per-table override

  ArbiterPolicy arbiter = ArbiterPolicy::kLongestQueue;
  std::size_t workers = 1;

  std::uint64_t datapath_id = 1;
  std::uint16_t miss_send_len = 128;
  MonotonicNs buffer_ttl = 10 * kNsPerSec;
  MonotonicNs echo_interval = 5 * kNsPerSec;
  int echo_max_missed = 3;

  // Controller channel: listen for an inbound controller connection, or
  // actively connect out.
  enum class ControllerMode : std::uint8_t { kListen, kConnect, kNone };
  ControllerMode controller_mode = ControllerMode::kListen;
  std::string controller_host = "0.0.0.0";
  std::uint16_t controller_port = 6633;

  // Optional pcap replay source / capture sink per port.
  std::map<std::uint32_t, std::string> port_pcap_in;
  std::map<std::uint32_t, std::string> port_pcap_out;

  MissPolicy miss_policy_for(std::size_t table) const {
    auto it = table_miss_policy.find(table);
    return it == table_miss_policy.end() ? default_miss_policy : it->second;
  }
};

// Loads `key = value` lines ('#' comments). Unknown keys and malformed
// values raise std::runtime_error naming the offending line. Schema is
// documented in the README.
SwitchConfig load_config(const std::string& path);
SwitchConfig parse_config(const std::string& text);

}  // namespace flowfabric
