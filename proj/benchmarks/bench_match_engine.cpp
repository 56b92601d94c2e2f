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

#include "flowfabric/match_engine.hpp"
#include "flowfabric/match_fields.hpp"

namespace {

using namespace flowfabric;

MaskedKey random_key(std::mt19937_64& rng, std::size_t width, bool exact) {
  Bytes value(width), mask(width);
  for (std::size_t i = 0; i < width; ++i) {
    std::uint64_t r = rng();
    mask[i] = exact ? 0xff : (r % 4 == 0 ? 0x00 : 0xff);
    value[i] = static_cast<std::uint8_t>(r >> 16) & mask[i];
  }
  return MaskedKey{std::move(value), std::move(mask)};
}

// Lookup over a populated matcher at the pipeline's key width.
void BM_Lookup(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const std::size_t entries = static_cast<std::size_t>(state.range(0));
  TernaryMatcher m(kMatchKeyWidth, 1024);
  for (std::size_t i = 0; i < entries; ++i) {
    m.insert(random_key(rng, kMatchKeyWidth, false),
             static_cast<std::uint32_t>(i % 64));
  }
  Bytes probe(kMatchKeyWidth);
  for (auto& b : probe) b = static_cast<std::uint8_t>(rng());
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.lookup(probe));
  }
}
BENCHMARK(BM_Lookup)->Arg(16)->Arg(256)->Arg(1024);

void BM_InsertExact(benchmark::State& state) {
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    state.PauseTiming();
    TernaryMatcher m(kMatchKeyWidth, 1024);
    std::vector<MaskedKey> keys;
    for (int i = 0; i < 256; ++i) {
      keys.push_back(random_key(rng, kMatchKeyWidth, true));
    }
    state.ResumeTiming();
    for (auto& k : keys) benchmark::DoNotOptimize(m.insert(k, 1));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_InsertExact);

// Wildcard-heavy insert exercises the write-address expansion.
void BM_InsertWildcard(benchmark::State& state) {
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    state.PauseTiming();
    TernaryMatcher m(kMatchKeyWidth, 1024);
    std::vector<MaskedKey> keys;
    for (int i = 0; i < 64; ++i) {
      keys.push_back(random_key(rng, kMatchKeyWidth, false));
    }
    state.ResumeTiming();
    for (auto& k : keys) benchmark::DoNotOptimize(m.insert(k, 1));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_InsertWildcard);

}  // namespace

BENCHMARK_MAIN();
