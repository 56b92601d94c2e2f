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

#include "flowfabric/match_fields.hpp"
#include "flowfabric/traffic.hpp"
#include "flowfabric/wire_packet.hpp"

namespace {

using namespace flowfabric;

RawFrame make_frame(std::size_t size, bool vlan) {
  FrameTemplate t;
  if (vlan) t.vlan_vid = 100;
  t.ip_proto = kIpProtoTcp;
  std::mt19937_64 rng(7);
  return RawFrame{1, build_frame(t, size, rng), 0};
}

void BM_ParseTcp64(benchmark::State& state) {
  RawFrame frame = make_frame(64, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse(frame));
  }
  state.SetBytesProcessed(state.iterations() * 64);
}
BENCHMARK(BM_ParseTcp64);

void BM_ParseTcp1500(benchmark::State& state) {
  RawFrame frame = make_frame(1500, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse(frame));
  }
  state.SetBytesProcessed(state.iterations() * 1500);
}
BENCHMARK(BM_ParseTcp1500);

void BM_ParseVlanTcp(benchmark::State& state) {
  RawFrame frame = make_frame(128, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse(frame));
  }
}
BENCHMARK(BM_ParseVlanTcp);

void BM_SerializeTuple(benchmark::State& state) {
  HeaderTuple t = parse(make_frame(64, false));
  for (auto _ : state) {
    benchmark::DoNotOptimize(serialize_tuple(t));
  }
}
BENCHMARK(BM_SerializeTuple);

}  // namespace

BENCHMARK_MAIN();
