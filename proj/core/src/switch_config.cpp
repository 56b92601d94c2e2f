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

#include "flowfabric/switch_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flowfabric {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    return std::stoull(v, nullptr, 0);  // accepts 0x...
  } catch (...) {
    throw std::runtime_error("config: bad number for '" + key + "': " + v);
  }
}

MissPolicy parse_miss(const std::string& v, const std::string& key) {
  if (v == "controller") return MissPolicy::kController;
  if (v == "drop") return MissPolicy::kDrop;
  throw std::runtime_error("config: '" + key +
                           "' must be controller|drop, got " + v);
}

}  // namespace

SwitchConfig parse_config(const std::string& text) {
  SwitchConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "ports") {
      cfg.port_count = static_cast<std::uint32_t>(parse_u64(value, key));
    } else if (key == "input_queue_capacity") {
      cfg.input_queue_capacity = parse_u64(value, key);
    } else if (key == "output_queue_capacity") {
      cfg.output_queue_capacity = parse_u64(value, key);
    } else if (key == "tables") {
      cfg.table_count = parse_u64(value, key);
    } else if (key == "table_capacity") {
      cfg.table_capacity = parse_u64(value, key);
    } else if (key == "packet_buffer_capacity") {
      cfg.packet_buffer_capacity = parse_u64(value, key);
    } else if (key == "miss_policy") {
      cfg.default_miss_policy = parse_miss(value, key);
    } else if (key.rfind("miss_policy.", 0) == 0) {
      std::size_t table = parse_u64(key.substr(12), key);
      cfg.table_miss_policy[table] = parse_miss(value, key);
    } else if (key == "arbiter") {
      if (value == "longest_queue") {
        cfg.arbiter = ArbiterPolicy::kLongestQueue;
      } else if (value == "round_robin") {
        cfg.arbiter = ArbiterPolicy::kRoundRobin;
      } else {
        throw std::runtime_error(
            "config: arbiter must be longest_queue|round_robin");
      }
    } else if (key == "workers") {
      cfg.workers = parse_u64(value, key);
    } else if (key == "datapath_id") {
      cfg.datapath_id = parse_u64(value, key);
    } else if (key == "miss_send_len") {
      cfg.miss_send_len = static_cast<std::uint16_t>(parse_u64(value, key));
    } else if (key == "buffer_ttl_ms") {
      cfg.buffer_ttl = parse_u64(value, key) * kNsPerMs;
    } else if (key == "echo_interval_ms") {
      cfg.echo_interval = parse_u64(value, key) * kNsPerMs;
    } else if (key == "echo_max_missed") {
      cfg.echo_max_missed = static_cast<int>(parse_u64(value, key));
    } else if (key == "controller_mode") {
      if (value == "listen") {
        cfg.controller_mode = SwitchConfig::ControllerMode::kListen;
      } else if (value == "connect") {
        cfg.controller_mode = SwitchConfig::ControllerMode::kConnect;
      } else if (value == "none") {
        cfg.controller_mode = SwitchConfig::ControllerMode::kNone;
      } else {
        throw std::runtime_error(
            "config: controller_mode must be listen|connect|none");
      }
    } else if (key == "controller_host") {
      cfg.controller_host = value;
    } else if (key == "controller_port") {
      cfg.controller_port = static_cast<std::uint16_t>(parse_u64(value, key));
    } else if (key.rfind("port.", 0) == 0) {
      auto rest = key.substr(5);
      auto dot = rest.find('.');
      if (dot == std::string::npos) {
        throw std::runtime_error("config: expected port.<n>.pcap_in|pcap_out");
      }
      auto port = static_cast<std::uint32_t>(
          parse_u64(rest.substr(0, dot), key));
      auto attr = rest.substr(dot + 1);
      if (attr == "pcap_in") {
        cfg.port_pcap_in[port] = value;
      } else if (attr == "pcap_out") {
        cfg.port_pcap_out[port] = value;
      } else {
        throw std::runtime_error("config: unknown port attribute '" + attr +
                                 "'");
      }
    } else {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
  }

  if (cfg.port_count == 0) throw std::runtime_error("config: ports == 0");
  if (cfg.table_count == 0) throw std::runtime_error("config: tables == 0");
  for (const auto& [table, policy] : cfg.table_miss_policy) {
    (void)policy;
    if (table >= cfg.table_count) {
      throw std::runtime_error("config: miss_policy for unknown table " +
                               std::to_string(table));
    }
  }
  return cfg;
}

SwitchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace flowfabric
