#pragma once

// Reference optimizer for a decision window: walks every protection vector
// recursively and keeps the cheapest one whose parity fits the budget. Costs
// are assembled here from the per-frame loss probabilities.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ulp/loss_model.hpp"
#include "ulp/stream.hpp"

namespace oracle {

struct EnumeratedOptimum {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<bool> policy;
  std::size_t feasible = 0;  // number of feasible policies visited
};

inline double frame_cost(const ulp::FrameMeta& f, bool prot, ulp::ChannelState s, const ulp::DistortionConstants& k,
                         const ulp::FecMatrixConfig& cfg, const ulp::ChannelParams& ch) {
  const double p = prot ? ulp::p_loss_protected(s, f.size_packets, cfg, ch) : ulp::p_loss_unprotected(s, f.size_packets, ch);
  return ulp::distortion(f, k) * p;
}

inline std::size_t parity_rows_rounded(std::size_t z, std::size_t d) {
  std::size_t u = 0;
  while (u < z) u += d;
  return u;
}

inline EnumeratedOptimum enumerate_policies(std::span<const ulp::FrameMeta> frames, ulp::ChannelState s,
                                            std::size_t available, const ulp::DistortionConstants& k,
                                            const ulp::FecMatrixConfig& cfg, const ulp::ChannelParams& ch) {
  EnumeratedOptimum best;
  std::vector<bool> current(frames.size(), false);

  auto visit = [&](auto&& self, std::size_t i, std::size_t used, double cost) -> void {
    if (used > available) return;
    if (i == frames.size()) {
      ++best.feasible;
      if (cost < best.cost) {
        best.cost = cost;
        best.policy = current;
      }
      return;
    }
    current[i] = false;
    self(self, i + 1, used, cost + frame_cost(frames[i], false, s, k, cfg, ch));
    current[i] = true;
    self(self, i + 1, used + parity_rows_rounded(frames[i].size_packets, cfg.rows_d),
         cost + frame_cost(frames[i], true, s, k, cfg, ch));
    current[i] = false;
  };
  visit(visit, 0, 0, 0.0);
  return best;
}

}  // namespace oracle
