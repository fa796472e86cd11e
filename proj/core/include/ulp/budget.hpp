#pragma once

#include <cstddef>
#include <span>

#include "ulp/fec.hpp"
#include "ulp/stream.hpp"

namespace ulp {

/// Rate and geometry parameters shared by all protection schemes.
struct ProtectionConfig {
  double r_protection = 0.0;  // bit/s available for parity packets
  double framerate = 25.0;    // source frames per second
  std::size_t n_frames_dfs = 5;
  FecMatrixConfig fec{};
  double p_coverage = 90.0;       // percent of I-frames the reservation should fit
  double l_pkt_fec = 10944.0;     // mean parity packet length, bits
  double l_pkt_data = 10848.0;    // mean data packet length, bits
};

/// Throws Error{Config}/Error{ParameterDomain} on invalid fields.
void validate(const ProtectionConfig& cfg);

struct NominalBudget {
  double n_bit_fec = 0.0;
  std::size_t n_pkt_fec = 0;
  std::size_t n_pkt_rtp = 0;  // data packets protectable: D per parity packet
};

/// Per-window budget: (r_protection / framerate) * dfs_len bits, converted to
/// whole parity packets (floor) and to protectable data packets.
NominalBudget nominal_budget(const ProtectionConfig& cfg, std::size_t dfs_len);

/// Mean length of the first `window` data packets plus the parity header.
double estimate_fec_packet_bits(std::span<const std::size_t> data_packet_bytes, std::size_t window = 100);

/// Size (same unit as the stats) below which p percent of I-frames fall under
/// a Gaussian fit: mu + sqrt(2) sigma erfinv(2p/100 - 1).
double size_threshold(const IFrameSizeStats& stats, double p);

struct Reservation {
  std::size_t n_pkt_rtp_threshold = 0;
  std::size_t n_pkt_rtp_reserved = 0;
};

/// Spreads a threshold-size I-frame (l_pct packets, rounded up) over the
/// PB-windows of one GOP (l_gop / n_frames_dfs - 1 of them) and caps the
/// per-window reservation at the nominal protectable packet count.
/// Throws Error{Config} when l_gop <= n_frames_dfs.
Reservation reservation_for(double l_pct_packets, double l_gop, std::size_t n_frames_dfs,
                            std::size_t n_pkt_rtp_nominal);

/// reservation_for() driven by I-frame statistics measured in packets.
Reservation reservation(const ProtectionConfig& cfg, const IFrameSizeStats& stats, double l_gop);

/// Budget carried from window to window by the VA-ULP scheme.
struct BudgetState {
  std::size_t n_pkt_fec_nominal = 0;
  std::size_t n_pkt_rtp_nominal = 0;
  std::size_t n_pkt_rtp_reserved = 0;  // withheld by every PB-window
  std::size_t reserve_pool = 0;        // accumulated since the last I-window

  bool operator==(const BudgetState&) const = default;
};

BudgetState initial_budget_state(const ProtectionConfig& cfg, const Reservation& r);

}  // namespace ulp
