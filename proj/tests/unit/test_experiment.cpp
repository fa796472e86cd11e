#include <gtest/gtest.h>

#include "ulp/error.hpp"
#include "ulp/experiment.hpp"

namespace {

ulp::ExperimentConfig small_config(ulp::Scheme scheme) {
  ulp::ExperimentConfig c;
  c.generator.n_gops = 40;
  c.scheme = scheme;
  c.redundancy_rate = 0.1;
  c.seeds = {1, 2, 3};
  c.jobs = 1;
  return c;
}

void expect_conserved(const ulp::TypeCounters& t) {
  EXPECT_EQ(t.sent_packets, t.received_packets + t.lost_packets);
  EXPECT_LE(t.recovered_packets, t.lost_packets);
  EXPECT_LE(t.protected_packets, t.sent_packets);
  EXPECT_LE(t.frames_effectively_lost, t.frames);
}

TEST(Experiment, CountersAreConserved) {
  for (auto scheme : {ulp::Scheme::VaUlp, ulp::Scheme::Mp, ulp::Scheme::Up}) {
    const auto p = ulp::prepare(small_config(scheme));
    for (const auto& m : ulp::run(p)) {
      ulp::TypeCounters sum;
      for (const auto& t : m.by_type) {
        expect_conserved(t);
        sum += t;
      }
      EXPECT_EQ(sum, m.overall);
      EXPECT_EQ(m.overall.sent_packets, p.trace.total_packets());
      EXPECT_EQ(m.overall.frames, p.trace.frames.size());
      EXPECT_LE(m.fec_packets_lost, m.fec_packets_sent);
    }
  }
}

TEST(Experiment, DeterministicAndThreadIndependent) {
  auto c = small_config(ulp::Scheme::VaUlp);
  c.seeds = {4, 5, 6, 7, 8};
  const auto p = ulp::prepare(c);
  const auto serial = ulp::run(p);
  EXPECT_EQ(serial, ulp::run(p));
  c.jobs = 3;
  EXPECT_EQ(serial, ulp::run(ulp::prepare(c)));
  EXPECT_EQ(serial[2], ulp::run_seed(p, 6));
  EXPECT_NE(serial[0].overall, serial[1].overall);
}

TEST(Experiment, FecSpendingWithinLedger) {
  for (auto scheme : {ulp::Scheme::VaUlp, ulp::Scheme::Mp, ulp::Scheme::Up}) {
    for (double rate : {0.05, 0.1, 0.15, 0.2}) {
      auto c = small_config(scheme);
      c.redundancy_rate = rate;
      for (const auto& m : ulp::run(c)) {
        EXPECT_LE(m.fec_bits_sent, m.budget_bits) << ulp::to_string(scheme) << " " << rate;
        EXPECT_LE(m.fec_bitrate, m.r_protection * 1.0 + 1e-6);
      }
    }
  }
}

TEST(Experiment, UniformSpendsAtLeastAsMuchAsVaUlp) {
  for (double rate : {0.05, 0.1, 0.2}) {
    auto up = small_config(ulp::Scheme::Up);
    auto va = small_config(ulp::Scheme::VaUlp);
    up.redundancy_rate = va.redundancy_rate = rate;
    const auto mu = ulp::run(up);
    const auto mv = ulp::run(va);
    for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_GE(mu[i].fec_bits_sent, mv[i].fec_bits_sent) << rate;
  }
}

TEST(Experiment, LosslessParityIsNeverLost) {
  auto c = small_config(ulp::Scheme::Up);
  c.fec_lossless = true;
  for (const auto& m : ulp::run(c)) {
    EXPECT_EQ(m.fec_packets_lost, 0u);
    EXPECT_GT(m.fec_packets_sent, 0u);
  }
}

TEST(Experiment, NoBudgetNoRecovery) {
  auto c = small_config(ulp::Scheme::Mp);
  c.r_protection = 0.0;
  for (const auto& m : ulp::run(c)) {
    EXPECT_EQ(m.fec_packets_sent, 0u);
    EXPECT_EQ(m.overall.recovered_packets, 0u);
    EXPECT_EQ(m.overall.protected_packets, 0u);
    EXPECT_EQ(m.redundancy, 0.0);
  }
}

TEST(Experiment, FullProtectionOfCleanChannel) {
  auto c = small_config(ulp::Scheme::Up);
  c.channel.plr = 1e-12;
  c.channel.abl = 1.0;
  c.redundancy_rate = 0.5;
  for (const auto& m : ulp::run(c)) {
    EXPECT_EQ(m.overall.lost_packets, 0u);
    EXPECT_EQ(m.overall.recovery_rate(), 1.0);
    EXPECT_EQ(m.distortion_proxy, 0.0);
    EXPECT_EQ(m.overall.protected_packets, m.overall.sent_packets);
  }
}

TEST(Experiment, DistortionCountsOnlyLostFrames) {
  const auto m = ulp::run(small_config(ulp::Scheme::Mp))[0];
  std::uint64_t lost_frames = 0;
  for (const auto& t : m.by_type) lost_frames += t.frames_effectively_lost;
  EXPECT_GT(lost_frames, 0u);
  EXPECT_GT(m.distortion_proxy, 0.0);
}

TEST(Experiment, HigherRedundancyRecoversMore) {
  auto lo = small_config(ulp::Scheme::Up);
  auto hi = small_config(ulp::Scheme::Up);
  lo.redundancy_rate = 0.05;
  hi.redundancy_rate = 0.3;
  lo.seeds = hi.seeds = {1, 2, 3, 4, 5, 6};
  double r_lo = 0.0, r_hi = 0.0;
  for (const auto& m : ulp::run(lo)) r_lo += m.overall.recovery_rate();
  for (const auto& m : ulp::run(hi)) r_hi += m.overall.recovery_rate();
  EXPECT_GT(r_hi, r_lo);
}

ulp::ErrorKind prepare_error(const ulp::ExperimentConfig& c) {
  try {
    ulp::prepare(c);
  } catch (const ulp::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "prepare() accepted an invalid config";
  return ulp::ErrorKind::Io;
}

TEST(Experiment, PrepareErrors) {
  auto c = small_config(ulp::Scheme::VaUlp);
  c.seeds.clear();
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::Config);

  c = small_config(ulp::Scheme::VaUlp);
  c.channel.plr = 0.9;
  c.channel.abl = 2.0;
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::ParameterDomain);

  c = small_config(ulp::Scheme::VaUlp);
  c.generator.n_gops = 1;
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::InsufficientData);
  c.scheme = ulp::Scheme::Up;  // baselines need no I-frame statistics
  EXPECT_NO_THROW(ulp::prepare(c));

  c = small_config(ulp::Scheme::VaUlp);
  c.n_frames_dfs = 12;
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::Config);

  c = small_config(ulp::Scheme::Up);
  c.redundancy_rate = 0.0;
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::Config);

  c = small_config(ulp::Scheme::Up);
  c.trace_file = "/nonexistent/trace.csv";
  EXPECT_EQ(prepare_error(c), ulp::ErrorKind::Io);
}

TEST(Experiment, SweepShape) {
  ulp::SweepConfig s;
  s.base = small_config(ulp::Scheme::Up);
  s.base.seeds = {1, 2};
  s.redundancy_rates = {0.05, 0.1};
  s.channels = {{"a", 0.01, 10.0, std::nullopt}, {"b", 0.02, 20.0, std::nullopt}};
  const auto runs = ulp::sweep(s);
  ASSERT_EQ(runs.size(), 2u * 2u * 3u * 2u);
  EXPECT_EQ(runs.front().channel, "a");
  EXPECT_EQ(runs.front().scheme, "va_ulp");
  EXPECT_EQ(runs.back().channel, "b");
  EXPECT_EQ(runs.back().scheme, "up");
  EXPECT_DOUBLE_EQ(runs.back().redundancy, 0.1);
}

TEST(Experiment, ChannelLabel) {
  ulp::ChannelConfig c;
  c.plr = 0.02;
  c.abl = 20;
  EXPECT_EQ(c.label(), "plr0.02_abl20");
  c.name = "wifi";
  EXPECT_EQ(c.label(), "wifi");
}

}  // namespace
