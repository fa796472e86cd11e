#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ulp/budget.hpp"
#include "ulp/error.hpp"
#include "ulp/numeric.hpp"

namespace {

TEST(ErfSeriesOracle, MatchesStdErf) {
  for (double x = -4.0; x <= 4.0; x += 0.01) EXPECT_NEAR(oracle::erf_series(x), std::erf(x), 5e-14) << x;
}

TEST(ErfInv, KnownValues) {
  EXPECT_EQ(ulp::erf_inv(0.0), 0.0);
  EXPECT_NEAR(ulp::erf_inv(0.682689492137086), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(ulp::erf_inv(0.5), 0.4769362762044699, 1e-12);
  EXPECT_NEAR(ulp::erf_inv(-0.5), -ulp::erf_inv(0.5), 1e-15);
}

TEST(ErfInv, InvertsSeriesErf) {
  for (int i = 1; i < 2000; ++i) {
    const double y = -1.0 + i / 1000.0;
    EXPECT_NEAR(oracle::erf_series(ulp::erf_inv(y)), y, 1e-12) << y;
  }
  for (double y : {1.0 - 1e-12, -1.0 + 1e-12, 1e-300, -1e-17}) {
    EXPECT_NEAR(std::erf(ulp::erf_inv(y)), y, 1e-15) << y;
  }
}

TEST(ErfInv, Domain) {
  for (double y : {1.0, -1.0, 1.5, std::nan("")}) {
    try {
      ulp::erf_inv(y);
      ADD_FAILURE() << y;
    } catch (const ulp::Error& e) {
      EXPECT_EQ(e.kind(), ulp::ErrorKind::ParameterDomain);
    }
  }
}

TEST(SizeThreshold, Quantiles) {
  const ulp::IFrameSizeStats st{90.0, 13.5};
  EXPECT_EQ(ulp::size_threshold(st, 50.0), 90.0);
  EXPECT_NEAR(ulp::size_threshold(st, 84.13447460685429), 90.0 + 13.5, 1e-9);
  EXPECT_NEAR(ulp::size_threshold(st, 97.72498680518208), 90.0 + 2 * 13.5, 1e-9);
  EXPECT_EQ(ulp::size_threshold({42.0, 0.0}, 99.0), 42.0);
  EXPECT_THROW(ulp::size_threshold(st, 0.0), ulp::Error);
  EXPECT_THROW(ulp::size_threshold(st, 100.0), ulp::Error);
}

ulp::ProtectionConfig nominal_config(double r) {
  ulp::ProtectionConfig c;
  c.r_protection = r;
  c.framerate = 25.0;
  c.n_frames_dfs = 5;
  c.fec = {4, 20};
  c.l_pkt_fec = 10848.0;
  return c;
}

TEST(Budget, NominalExample) {
  const auto b = ulp::nominal_budget(nominal_config(600000.0), 5);
  EXPECT_DOUBLE_EQ(b.n_bit_fec, 120000.0);
  EXPECT_EQ(b.n_pkt_fec, 11u);
  EXPECT_EQ(b.n_pkt_rtp, 44u);
}

TEST(Budget, ScalesWithWindowLength) {
  const auto c = nominal_config(600000.0);
  EXPECT_DOUBLE_EQ(ulp::nominal_budget(c, 2).n_bit_fec, 48000.0);
  EXPECT_EQ(ulp::nominal_budget(c, 1).n_pkt_fec, 2u);
  EXPECT_EQ(ulp::nominal_budget(nominal_config(0.0), 5).n_pkt_rtp, 0u);
}

TEST(Budget, FecPacketEstimate) {
  const std::vector<std::size_t> sizes{1356, 1356, 1000, 1000};
  EXPECT_DOUBLE_EQ(ulp::estimate_fec_packet_bits(sizes, 2), 8.0 * (1356 + 12));
  EXPECT_DOUBLE_EQ(ulp::estimate_fec_packet_bits(sizes, 100), 8.0 * (1178 + 12));
  EXPECT_THROW(ulp::estimate_fec_packet_bits({}, 100), ulp::Error);
}

TEST(Budget, ValidateRejects) {
  auto c = nominal_config(1.0);
  c.p_coverage = 100.0;
  EXPECT_THROW(ulp::validate(c), ulp::Error);
  c = nominal_config(-1.0);
  EXPECT_THROW(ulp::validate(c), ulp::Error);
  c = nominal_config(1.0);
  c.framerate = 0.0;
  EXPECT_THROW(ulp::validate(c), ulp::Error);
}

TEST(Reservation, Examples) {
  auto r = ulp::reservation_for(88.0, 60.0, 5, 100);
  EXPECT_EQ(r.n_pkt_rtp_threshold, 8u);
  EXPECT_EQ(r.n_pkt_rtp_reserved, 8u);
  r = ulp::reservation_for(88.0, 60.0, 5, 5);
  EXPECT_EQ(r.n_pkt_rtp_reserved, 5u);
  r = ulp::reservation_for(0.0, 60.0, 5, 44);
  EXPECT_EQ(r.n_pkt_rtp_reserved, 0u);
  // The threshold-size frame is rounded up to whole packets first.
  r = ulp::reservation_for(87.2, 12.0, 5, 1000);
  EXPECT_EQ(r.n_pkt_rtp_threshold, 63u);  // ceil(88 / 1.4)
  EXPECT_THROW(ulp::reservation_for(88.0, 5.0, 5, 44), ulp::Error);
}

TEST(Reservation, FromStatistics) {
  auto c = nominal_config(1.2e6);
  const ulp::IFrameSizeStats st{100.0, 10.0};
  const auto r = ulp::reservation(c, st, 60.0);
  const double l_pct = 100.0 + std::sqrt(2.0) * 10.0 * ulp::erf_inv(0.8);
  EXPECT_EQ(r.n_pkt_rtp_threshold, static_cast<std::size_t>(std::ceil(std::ceil(l_pct) / 11.0)));
  const auto s = ulp::initial_budget_state(c, r);
  EXPECT_EQ(s.n_pkt_rtp_nominal, 88u);
  EXPECT_EQ(s.n_pkt_fec_nominal, 22u);
  EXPECT_EQ(s.n_pkt_rtp_reserved, r.n_pkt_rtp_reserved);
  EXPECT_EQ(s.reserve_pool, 0u);
}

}  // namespace
