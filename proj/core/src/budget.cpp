#include "ulp/budget.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ulp/error.hpp"
#include "ulp/numeric.hpp"

namespace ulp {

void validate(const ProtectionConfig& cfg) {
  if (!(cfg.r_protection >= 0.0)) throw Error(ErrorKind::Config, "r_protection must be >= 0");
  if (!(cfg.framerate > 0.0)) throw Error(ErrorKind::Config, "framerate must be positive");
  if (cfg.n_frames_dfs < 1) throw Error(ErrorKind::Config, "n_frames_dfs must be >= 1");
  validate(cfg.fec);
  if (!(cfg.p_coverage > 0.0 && cfg.p_coverage < 100.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("p_coverage must lie in (0,100), got {}", cfg.p_coverage));
  }
  if (!(cfg.l_pkt_fec > 0.0)) throw Error(ErrorKind::Config, "l_pkt_fec must be positive");
  if (!(cfg.l_pkt_data > 0.0)) throw Error(ErrorKind::Config, "l_pkt_data must be positive");
}

NominalBudget nominal_budget(const ProtectionConfig& cfg, std::size_t dfs_len) {
  NominalBudget b;
  b.n_bit_fec = cfg.r_protection / cfg.framerate * static_cast<double>(dfs_len);
  b.n_pkt_fec = static_cast<std::size_t>(std::floor(b.n_bit_fec / cfg.l_pkt_fec));
  b.n_pkt_rtp = std::size_t{cfg.fec.rows_d} * b.n_pkt_fec;
  return b;
}

double estimate_fec_packet_bits(std::span<const std::size_t> data_packet_bytes, std::size_t window) {
  const std::size_t n = std::min(window, data_packet_bytes.size());
  if (n == 0) throw Error(ErrorKind::InsufficientData, "no data packets to estimate the parity packet length");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<double>(data_packet_bytes[i]);
  return 8.0 * (sum / static_cast<double>(n) + static_cast<double>(kFecHeaderSize));
}

double size_threshold(const IFrameSizeStats& stats, double p) {
  if (!(p > 0.0 && p < 100.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("coverage percentage must lie in (0,100), got {}", p));
  }
  return stats.mu + std::numbers::sqrt2 * stats.sigma * erf_inv(2.0 * (p / 100.0) - 1.0);
}

Reservation reservation_for(double l_pct_packets, double l_gop, std::size_t n_frames_dfs,
                            std::size_t n_pkt_rtp_nominal) {
  if (n_frames_dfs < 1) throw Error(ErrorKind::Config, "n_frames_dfs must be >= 1");
  if (!(l_gop > static_cast<double>(n_frames_dfs))) {
    throw Error(ErrorKind::Config,
                fmt::format("GOP length {} must exceed n_frames_dfs {} to leave PB-windows to reserve from", l_gop,
                            n_frames_dfs));
  }
  const double pb_windows = l_gop / static_cast<double>(n_frames_dfs) - 1.0;
  const double needed = std::ceil(std::max(0.0, l_pct_packets));
  Reservation r;
  r.n_pkt_rtp_threshold = static_cast<std::size_t>(std::ceil(needed / pb_windows - 1e-9));
  r.n_pkt_rtp_reserved = std::min(r.n_pkt_rtp_threshold, n_pkt_rtp_nominal);
  return r;
}

Reservation reservation(const ProtectionConfig& cfg, const IFrameSizeStats& stats, double l_gop) {
  const double l_pct = size_threshold(stats, cfg.p_coverage);
  return reservation_for(l_pct, l_gop, cfg.n_frames_dfs, nominal_budget(cfg, cfg.n_frames_dfs).n_pkt_rtp);
}

BudgetState initial_budget_state(const ProtectionConfig& cfg, const Reservation& r) {
  const auto nominal = nominal_budget(cfg, cfg.n_frames_dfs);
  BudgetState s;
  s.n_pkt_fec_nominal = nominal.n_pkt_fec;
  s.n_pkt_rtp_nominal = nominal.n_pkt_rtp;
  s.n_pkt_rtp_reserved = std::min(r.n_pkt_rtp_reserved, nominal.n_pkt_rtp);
  s.reserve_pool = 0;
  return s;
}

}  // namespace ulp
