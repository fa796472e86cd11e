#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ulp/budget.hpp"
#include "ulp/channel.hpp"
#include "ulp/loss_model.hpp"
#include "ulp/stream.hpp"

namespace ulp {

enum class Scheme : std::uint8_t { VaUlp, Mp, Up };

std::string_view to_string(Scheme s) noexcept;
/// Accepts "va_ulp", "mp", "up". Throws Error{Config} otherwise.
Scheme parse_scheme(std::string_view name);

/// What the decision for one window sees: the coding features of its frames
/// and the channel state after the previous window's last packet.
struct DfsState {
  std::span<const FrameMeta> frames;
  ChannelState s = ChannelState::G;
  DfsKind kind = DfsKind::PBDfs;
};

DfsState make_dfs_state(const Dfs& dfs, ChannelState s);

struct Policy {
  std::vector<bool> protect;

  std::size_t protected_frames() const noexcept;
  bool operator==(const Policy&) const = default;
};

/// Budget units a protected frame consumes: its size rounded up to whole
/// parity columns (D * ceil(z / D)). With D = 1 this is the frame size.
std::size_t protection_units(std::size_t z, std::size_t column_rows);

/// Expected distortion of the window under a policy: sum over frames of
/// distortion(frame) * P(frame not reconstructed | s, protected?).
/// Throws Error{Input} if the policy length differs from the window.
double dfs_cost(const DfsState& dfs, const Policy& pi, const DistortionConstants& k, const FecMatrixConfig& cfg,
                const ChannelParams& ch);

struct VaUlpDecision {
  Policy policy;
  BudgetState budget;          // state to carry into the next window
  std::size_t available = 0;   // data-packet budget this window could use
  double cost = 0.0;
};

/// Largest window the exhaustive search accepts.
inline constexpr std::size_t kMaxExhaustiveFrames = 24;

/// Exhaustive minimum-cost policy under the window's budget. PB-windows give
/// up n_pkt_rtp_reserved packets to the pool; I-windows spend the nominal
/// budget plus the pool, which is then emptied. Ties go to fewer protected
/// packets, then to protecting earlier frames.
VaUlpDecision decide_va_ulp(const DfsState& dfs, const BudgetState& budget, const DistortionConstants& k,
                            const ProtectionConfig& cfg, const ChannelParams& ch);

/// Frame-priority baseline: I-frames, then P-frames, then B-frames, each
/// class from farthest to closest to the GOP end; a frame that does not fit
/// is skipped and smaller lower-priority frames may still be protected.
Policy decide_mp(std::span<const FrameMeta> frames, std::size_t n_pkt_rtp_budget, std::size_t column_rows = 1);

/// Uniform baseline: number of leading data packets of the window that get
/// protected (all of them if the budget covers the window, otherwise the
/// budget rounded down to whole columns of column_rows packets).
std::size_t decide_up(std::size_t packet_count_in_dfs, std::size_t n_pkt_rtp_budget, std::size_t column_rows);

}  // namespace ulp
