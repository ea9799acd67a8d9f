// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include "benchmark/benchmark.h"
#include "dpaudit/accountant.h"
#include "dpaudit/attack.h"
#include "dpaudit/dataset.h"
#include "dpaudit/random.h"
#include "dpaudit/trainer.h"

namespace dpaudit {
namespace {

void BM_RdpCurve(benchmark::State& state) {
  const std::vector<double> orders = DefaultRdpOrders();
  for (auto _ : state) {
    auto curve = SubsampledGaussianRdp(1.1, 0.02, orders);
    benchmark::DoNotOptimize(curve);
  }
}
BENCHMARK(BM_RdpCurve);

void BM_AccountRdp(benchmark::State& state) {
  SgdConfig c;
  c.noise_multiplier = 4.0;
  for (auto _ : state) {
    auto a = Account(c, AnalysisKind::kRdp, 1e-5);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_AccountRdp);

void BM_CalibrateRdp(benchmark::State& state) {
  SgdConfig c;
  for (auto _ : state) {
    auto s = CalibrateNoiseMultiplier(1.0, AnalysisKind::kRdp, c, 1e-5);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_CalibrateRdp)->Unit(benchmark::kMillisecond);

// One epoch of DP-SGD at desk scale.
void BM_TrainEpoch(benchmark::State& state) {
  const auto splits = GenerateSynthetic({state.range(0), 50, 10, 3.0, 1});
  SgdConfig c;
  c.sampling_rate = 0.02;
  c.epochs = 1;
  c.steps = SgdConfig::StepsFor(1, 0.02);
  for (auto _ : state) {
    auto r = TrainDpSgd(splits->train, c);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainEpoch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Roc(benchmark::State& state) {
  RandomStream stream(7);
  std::vector<double> members(state.range(0)), nonmembers(state.range(0));
  for (double& x : members) x = stream.NextGaussian();
  for (double& x : nonmembers) x = 0.1 + stream.NextGaussian();
  for (auto _ : state) {
    auto curve = ComputeRoc(members, nonmembers);
    benchmark::DoNotOptimize(ComputeBestAdvantage(*curve));
  }
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_Roc)->Arg(1000)->Arg(10000);

}  // namespace
}  // namespace dpaudit

BENCHMARK_MAIN();
