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

#include <string>

#include "flowfabric/switch_core.hpp"
#include "flowfabric/traffic.hpp"

namespace flowfabric {

// Pipelined-fabric throughput model: processing data width times clock
// frequency. 512 bits at 160 MHz gives 81.92 Gbps.
// Throws std::invalid_argument on non-positive inputs.
double theoretical_throughput_gbps(double data_width_bits, double clock_mhz);

struct BenchReport {
  std::uint64_t packets_generated = 0;
  std::uint64_t packets_forwarded = 0;
  std::uint64_t bytes_forwarded = 0;
  std::uint64_t drops = 0;  // every drop bucket, input and dataplane
  double elapsed_sec = 0;
  double pps = 0;
  double gbps = 0;  // forwarded bits / elapsed
  std::uint64_t latency_p50_ns = 0;
  std::uint64_t latency_p99_ns = 0;
  ConservationReport conservation;

  std::string to_text() const;
  std::string to_json() const;
};

// Drives a controller-less switch with generated traffic. Installs one
// exact in_port flow per traffic flow (output to the next port, wrapping),
// feeds frames in bounded batches so a sufficient queue capacity yields zero
// drops, and measures ingress-to-egress latency from software timestamps.
// rate_pps > 0 paces generation against the wall clock.
BenchReport run_benchmark(const TrafficSpec& spec, const SwitchConfig& config);

}  // namespace flowfabric
