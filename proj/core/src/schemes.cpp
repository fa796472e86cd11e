#include "ulp/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::VaUlp: return "va_ulp";
    case Scheme::Mp: return "mp";
    case Scheme::Up: return "up";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "va_ulp") return Scheme::VaUlp;
  if (name == "mp") return Scheme::Mp;
  if (name == "up") return Scheme::Up;
  throw Error(ErrorKind::Config, fmt::format("unknown scheme '{}' (expected va_ulp, mp or up)", name));
}

DfsState make_dfs_state(const Dfs& dfs, ChannelState s) { return {dfs.frames, s, dfs.kind}; }

std::size_t Policy::protected_frames() const noexcept {
  return static_cast<std::size_t>(std::count(protect.begin(), protect.end(), true));
}

std::size_t protection_units(std::size_t z, std::size_t column_rows) {
  const std::size_t d = std::max<std::size_t>(column_rows, 1);
  return d * ((z + d - 1) / d);
}

namespace {

struct FrameCosts {
  double unprotected;
  double protected_;
};

FrameCosts frame_costs(const FrameMeta& f, ChannelState s, const DistortionConstants& k, const FecMatrixConfig& cfg,
                       const ChannelParams& ch) {
  const double d = distortion(f, k);
  return {d * p_loss_unprotected(s, f.size_packets, ch), d * p_loss_protected(s, f.size_packets, cfg, ch)};
}

}  // namespace

double dfs_cost(const DfsState& dfs, const Policy& pi, const DistortionConstants& k, const FecMatrixConfig& cfg,
                const ChannelParams& ch) {
  if (pi.protect.size() != dfs.frames.size()) {
    throw Error(ErrorKind::Input, fmt::format("policy has {} entries for a window of {} frames", pi.protect.size(),
                                              dfs.frames.size()));
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < dfs.frames.size(); ++i) {
    const auto c = frame_costs(dfs.frames[i], dfs.s, k, cfg, ch);
    cost += pi.protect[i] ? c.protected_ : c.unprotected;
  }
  return cost;
}

VaUlpDecision decide_va_ulp(const DfsState& dfs, const BudgetState& budget, const DistortionConstants& k,
                            const ProtectionConfig& cfg, const ChannelParams& ch) {
  const std::size_t n = dfs.frames.size();
  if (n > kMaxExhaustiveFrames) {
    throw Error(ErrorKind::Config,
                fmt::format("window of {} frames exceeds the exhaustive search limit of {}", n, kMaxExhaustiveFrames));
  }

  // Short trailing windows get a proportionally smaller nominal budget.
  const std::size_t nominal =
      n == cfg.n_frames_dfs ? budget.n_pkt_rtp_nominal : nominal_budget(cfg, n).n_pkt_rtp;

  VaUlpDecision out;
  out.budget = budget;
  if (dfs.kind == DfsKind::PBDfs) {
    const std::size_t reserved = std::min(budget.n_pkt_rtp_reserved, nominal);
    out.available = nominal - reserved;
    out.budget.reserve_pool += reserved;
  } else {
    out.available = nominal + budget.reserve_pool;
    out.budget.reserve_pool = 0;
  }

  std::vector<FrameCosts> costs(n);
  std::vector<std::size_t> units(n);
  for (std::size_t i = 0; i < n; ++i) {
    costs[i] = frame_costs(dfs.frames[i], dfs.s, k, cfg.fec, ch);
    units[i] = protection_units(dfs.frames[i].size_packets, cfg.fec.rows_d);
  }

  // Bit i of a mask protects frame i. Among equal-cost, equal-size policies
  // the one protecting the earliest differing frame wins.
  auto earlier_first = [n](std::uint32_t a, std::uint32_t b) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool pa = (a >> i) & 1u;
      const bool pb = (b >> i) & 1u;
      if (pa != pb) return pa;
    }
    return false;
  };

  std::uint32_t best = 0;
  double best_cost = 0.0;
  std::size_t best_packets = 0;
  for (std::size_t i = 0; i < n; ++i) best_cost += costs[i].unprotected;

  const std::uint32_t limit = n == 0 ? 1u : (1u << n);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    std::size_t used = 0;
    std::size_t packets = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) {
        used += units[i];
        packets += dfs.frames[i].size_packets;
        cost += costs[i].protected_;
      } else {
        cost += costs[i].unprotected;
      }
    }
    if (used > out.available) continue;
    const double tol = 1e-12 * std::max({1.0, std::abs(cost), std::abs(best_cost)});
    bool better = cost < best_cost - tol;
    if (!better && std::abs(cost - best_cost) <= tol) {
      better = packets < best_packets || (packets == best_packets && earlier_first(mask, best));
    }
    if (better) {
      best = mask;
      best_cost = cost;
      best_packets = packets;
    }
  }

  out.policy.protect.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.policy.protect[i] = (best >> i) & 1u;
  out.cost = best_cost;
  return out;
}

Policy decide_mp(std::span<const FrameMeta> frames, std::size_t n_pkt_rtp_budget, std::size_t column_rows) {
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& fa = frames[a];
    const auto& fb = frames[b];
    if (fa.type != fb.type) return static_cast<int>(fa.type) < static_cast<int>(fb.type);
    return fa.dist_to_gop_end > fb.dist_to_gop_end;
  });

  Policy pi;
  pi.protect.assign(frames.size(), false);
  std::size_t remaining = n_pkt_rtp_budget;
  for (std::size_t idx : order) {
    const std::size_t u = protection_units(frames[idx].size_packets, column_rows);
    if (u <= remaining) {
      pi.protect[idx] = true;
      remaining -= u;
    }
  }
  return pi;
}

std::size_t decide_up(std::size_t packet_count_in_dfs, std::size_t n_pkt_rtp_budget, std::size_t column_rows) {
  if (n_pkt_rtp_budget >= packet_count_in_dfs) return packet_count_in_dfs;
  const std::size_t d = std::max<std::size_t>(column_rows, 1);
  return (n_pkt_rtp_budget / d) * d;
}

}  // namespace ulp
