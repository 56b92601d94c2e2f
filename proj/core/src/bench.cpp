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

#include "flowfabric/bench.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace flowfabric {

double theoretical_throughput_gbps(double data_width_bits, double clock_mhz) {
  if (data_width_bits <= 0 || clock_mhz <= 0) {
    throw std::invalid_argument(
        "data width and clock frequency must be positive");
  }
  // bits * MHz = Mbit/s; scale to Gbit/s.
  return data_width_bits * clock_mhz * 1e-3;
}

namespace {

std::uint64_t percentile(std::vector<std::uint64_t>& sorted, double p) {
  if (sorted.empty()) return 0;
  std::size_t idx = static_cast<std::size_t>(p * (sorted.size() - 1));
  return sorted[idx];
}

}  // namespace

BenchReport run_benchmark(const TrafficSpec& spec,
                          const SwitchConfig& config_in) {
  SwitchConfig config = config_in;
  config.controller_mode = SwitchConfig::ControllerMode::kNone;
  Switch sw(config);

  // One exact in_port flow per traffic flow: forward to the next port.
  for (const FlowTrafficSpec& f : spec.flows) {
    if (f.ingress_port >= config.port_count) {
      throw std::invalid_argument("traffic flow names an unknown port");
    }
    FlowModRequest req;
    req.command = ofp::OFPFC_ADD;
    req.table_id = 0;
    req.priority = 1;
    req.match = MaskedKey::wildcard(kMatchKeyWidth);
    apply_field(req.match, FieldId::kInPort, f.ingress_port, std::nullopt);
    std::uint32_t out_port = (f.ingress_port + 1) % config.port_count;
    req.instructions.write_actions = {{Action::output(out_port)}};
    if (auto err = sw.apply_flow_mod(req)) {
      throw std::runtime_error("benchmark flow install failed: error type " +
                               std::to_string(err->err_type));
    }
  }

  TrafficGenerator gen(spec);
  std::vector<std::uint64_t> latencies;
  latencies.reserve(std::min<std::uint64_t>(gen.total(), 1u << 22));

  const std::size_t batch =
      std::max<std::size_t>(1, config.input_queue_capacity / 2);
  const MonotonicNs t0 = now_monotonic_ns();
  bool exhausted = false;
  std::uint64_t forwarded = 0, bytes_fwd = 0;

  auto drain_egress = [&] {
    const MonotonicNs now = now_monotonic_ns();
    for (std::uint32_t p = 0; p < config.port_count; ++p) {
      while (auto f = sw.pop_egress(p)) {
        ++forwarded;
        bytes_fwd += f->data.size();
        latencies.push_back(now - f->ingress_at);
      }
    }
  };

  while (!exhausted) {
    for (std::size_t i = 0; i < batch; ++i) {
      if (spec.rate_pps > 0) {
        // Pace against the wall clock: generated/elapsed <= rate.
        const double elapsed =
            static_cast<double>(now_monotonic_ns() - t0) / 1e9;
        if (static_cast<double>(gen.generated()) >
            spec.rate_pps * elapsed) {
          std::this_thread::sleep_for(std::chrono::microseconds(50));
          break;
        }
      }
      auto item = gen.next();
      if (!item) {
        exhausted = true;
        break;
      }
      sw.ingress(item->ingress_port, std::move(item->frame));
    }
    sw.pump();
    drain_egress();
  }
  sw.pump();
  drain_egress();
  const MonotonicNs t1 = now_monotonic_ns();

  BenchReport report;
  report.packets_generated = gen.generated();
  report.packets_forwarded = forwarded;
  report.bytes_forwarded = bytes_fwd;
  report.conservation = sw.conservation();
  const ConservationReport& c = report.conservation;
  report.drops = c.rx_dropped + c.tx_dropped + c.dropped_malicious +
                 c.dropped_miss + c.dropped_buffer_full +
                 c.dropped_empty_set + c.dropped_ttl + c.dropped_bad_port;
  report.elapsed_sec = static_cast<double>(t1 - t0) / 1e9;
  if (report.elapsed_sec > 0) {
    report.pps = static_cast<double>(forwarded) / report.elapsed_sec;
    report.gbps =
        static_cast<double>(bytes_fwd) * 8.0 / report.elapsed_sec / 1e9;
  }
  std::sort(latencies.begin(), latencies.end());
  report.latency_p50_ns = percentile(latencies, 0.50);
  report.latency_p99_ns = percentile(latencies, 0.99);
  return report;
}

std::string BenchReport::to_text() const {
  std::ostringstream os;
  os << "packets_generated  " << packets_generated << "\n"
     << "packets_forwarded  " << packets_forwarded << "\n"
     << "bytes_forwarded    " << bytes_forwarded << "\n"
     << "drops              " << drops << "\n"
     << "elapsed_sec        " << elapsed_sec << "\n"
     << "pps                " << pps << "\n"
     << "gbps               " << gbps << "\n"
     << "latency_p50_ns     " << latency_p50_ns << "\n"
     << "latency_p99_ns     " << latency_p99_ns << "\n"
     << "conservation_lhs   " << conservation.lhs() << "\n"
     << "conservation_rhs   " << conservation.rhs() << "\n"
     << "balanced           " << (conservation.balanced() ? "yes" : "no")
     << "\n";
  return os.str();
}

std::string BenchReport::to_json() const {
  nlohmann::json j;
  j["packets_generated"] = packets_generated;
  j["packets_forwarded"] = packets_forwarded;
  j["bytes_forwarded"] = bytes_forwarded;
  j["drops"] = drops;
  j["elapsed_sec"] = elapsed_sec;
  j["pps"] = pps;
  j["gbps"] = gbps;
  j["latency_p50_ns"] = latency_p50_ns;
  j["latency_p99_ns"] = latency_p99_ns;
  j["conservation"] = {{"rx_total", conservation.rx_total},
                       {"injected", conservation.injected},
                       {"fanout_surplus", conservation.fanout_surplus},
                       {"tx_total", conservation.tx_total},
                       {"rx_dropped", conservation.rx_dropped},
                       {"tx_dropped", conservation.tx_dropped},
                       {"delivered_to_controller",
                        conservation.delivered_to_controller},
                       {"dropped_malicious", conservation.dropped_malicious},
                       {"dropped_miss", conservation.dropped_miss},
                       {"dropped_buffer_full",
                        conservation.dropped_buffer_full},
                       {"dropped_empty_set", conservation.dropped_empty_set},
                       {"dropped_ttl", conservation.dropped_ttl},
                       {"dropped_bad_port", conservation.dropped_bad_port},
                       {"buffer_expired", conservation.buffer_expired},
                       {"buffered_live", conservation.buffered_live},
                       {"balanced", conservation.balanced()}};
  return j.dump(2);
}

}  // namespace flowfabric
