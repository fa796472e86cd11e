#include <benchmark/benchmark.h>

#include <vector>

#include "ulp/channel.hpp"
#include "ulp/experiment.hpp"
#include "ulp/fec.hpp"
#include "ulp/rng.hpp"
#include "ulp/rtp.hpp"
#include "ulp/schemes.hpp"

namespace {

void BM_ChannelTransmit(benchmark::State& state) {
  ulp::GilbertElliottChannel ch(ulp::derive_params(0.01, 10.0), ulp::ChannelState::G, ulp::Rng(1));
  for (auto _ : state) benchmark::DoNotOptimize(ch.transmit());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ChannelTransmit);

void BM_DecideVaUlp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ulp::Rng rng(3);
  std::vector<ulp::FrameMeta> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    frames[i] = {i, static_cast<ulp::FrameType>(i == 0 ? 0 : 1 + i % 2),
                 static_cast<std::uint32_t>(20 + rng.next_u64() % 100), static_cast<std::uint32_t>(11 - i % 12)};
  }
  ulp::ProtectionConfig cfg;
  cfg.r_protection = 1.2e6;
  cfg.n_frames_dfs = n;
  ulp::BudgetState b;
  b.n_pkt_rtp_nominal = 40 * n;
  const auto ch = ulp::derive_params(0.01, 10.0);
  for (auto _ : state) {
    auto d = ulp::decide_va_ulp({frames, ulp::ChannelState::G, ulp::DfsKind::IDfs}, b, {}, cfg, ch);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_DecideVaUlp)->Arg(5)->Arg(8)->Arg(12);

void BM_FecEncode(benchmark::State& state) {
  const ulp::FrameMeta f{0, ulp::FrameType::I, static_cast<std::uint32_t>(state.range(0)), 11};
  const auto pkts = ulp::packetize_frame(f, 1, 0, 0, 1316);
  for (auto _ : state) benchmark::DoNotOptimize(ulp::encode(pkts, {4, 20}));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 1316);
}
BENCHMARK(BM_FecEncode)->Arg(80)->Arg(124);

void BM_RunSeed(benchmark::State& state) {
  ulp::ExperimentConfig c;
  c.generator.n_gops = 250;
  c.scheme = static_cast<ulp::Scheme>(state.range(0));
  c.redundancy_rate = 0.1;
  const auto p = ulp::prepare(c);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ulp::run_seed(p, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.trace.total_packets()));
}
BENCHMARK(BM_RunSeed)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
