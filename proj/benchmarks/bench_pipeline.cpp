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

#include <benchmark/benchmark.h>

#include <random>

#include "flowfabric/flow_pipeline.hpp"
#include "flowfabric/switch_core.hpp"
#include "flowfabric/traffic.hpp"

namespace {

using namespace flowfabric;

HeaderTuple udp_tuple(std::uint32_t port, std::uint16_t dst) {
  HeaderTuple t;
  t.in_port = port;
  t.eth_dst = 0x001122334455;
  t.eth_src = 0xa0b0c0d0e0f0;
  t.eth_type = kEthTypeIpv4;
  t.ip_proto = kIpProtoUdp;
  t.ipv4_src = 0x0a000001;
  t.ipv4_dst = 0x0a000002;
  t.l4_src = 9999;
  t.l4_dst = dst;
  t.header_len = 42;
  return t;
}

void install(Pipeline& p, std::uint8_t table, std::uint32_t in_port,
             std::optional<std::uint8_t> goto_table) {
  FlowModRequest req;
  req.command = ofp::OFPFC_ADD;
  req.table_id = table;
  req.priority = 1;
  req.match = MaskedKey::wildcard(kMatchKeyWidth);
  apply_field(req.match, FieldId::kInPort, in_port, std::nullopt);
  req.instructions.write_actions = {{Action::output(1)}};
  req.instructions.goto_table = goto_table;
  p.apply_flow_mod(req, 1);
}

void BM_ProcessSingleTable(benchmark::State& state) {
  Pipeline p({4, 1024});
  install(p, 0, 1, std::nullopt);
  HeaderTuple t = udp_tuple(1, 53);
  MonotonicNs now = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.process(t, 64, ++now));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessSingleTable);

void BM_ProcessFourTableChain(benchmark::State& state) {
  Pipeline p({4, 1024});
  install(p, 0, 1, 1);
  install(p, 1, 1, 2);
  install(p, 2, 1, 3);
  install(p, 3, 1, std::nullopt);
  HeaderTuple t = udp_tuple(1, 53);
  MonotonicNs now = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.process(t, 64, ++now));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProcessFourTableChain);

// The whole per-frame path as the switch drives it.
void BM_SwitchFrame(benchmark::State& state) {
  SwitchConfig cfg;
  cfg.port_count = 2;
  cfg.input_queue_capacity = 4;
  cfg.output_queue_capacity = 4;
  cfg.controller_mode = SwitchConfig::ControllerMode::kNone;
  Switch sw(cfg);
  FlowModRequest req;
  req.command = ofp::OFPFC_ADD;
  req.priority = 1;
  req.match = MaskedKey::wildcard(kMatchKeyWidth);
  apply_field(req.match, FieldId::kInPort, 0, std::nullopt);
  req.instructions.write_actions = {{Action::output(1)}};
  sw.apply_flow_mod(req);

  FrameTemplate tmpl;
  std::mt19937_64 rng(1);
  Bytes frame = build_frame(tmpl, 64, rng);
  for (auto _ : state) {
    sw.ingress(0, frame);
    sw.pump();
    benchmark::DoNotOptimize(sw.pop_egress(1));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SwitchFrame);

}  // namespace

BENCHMARK_MAIN();
