#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ulp/rng.hpp"

namespace ulp {

/// Gilbert-Elliott state of the most recent packet: G = received, B = lost.
enum class ChannelState : std::uint8_t { G, B };

/// Transition probabilities of the simplified (two-state) Gilbert-Elliott
/// model, plus the loss statistics they were fitted to. Rows always sum to 1.
struct ChannelParams {
  double p_gg = 1.0;
  double p_gb = 0.0;
  double p_bg = 1.0;
  double p_bb = 0.0;
  double plr = 0.0;  // long-run loss rate the parameters reproduce
  double abl = 1.0;  // mean run length of consecutive losses

  /// Builds parameters from the two free transition probabilities. plr/abl
  /// are filled in analytically; abl is +inf when p_bg == 0.
  static ChannelParams from_transitions(double p_gb, double p_bg);
};

/// Fits the chain to a target loss rate and mean burst length:
/// p_bg = 1/abl (geometric bursts), p_gb from stationarity.
/// Throws Error{ParameterDomain} naming the offending field.
ChannelParams derive_params(double plr, double abl);

struct StationaryDist {
  double p_g;
  double p_b;
};

/// Throws Error{DegenerateChain} when p_gb + p_bg == 0.
StationaryDist stationary(const ChannelParams& params);

struct StepResult {
  ChannelState state;
  bool received;
};

/// One transmission: draws the next state from the row of `state`.
StepResult step(const ChannelParams& params, ChannelState state, Rng& rng);

/// Draws an initial state from the stationary distribution.
ChannelState draw_stationary_state(const ChannelParams& params, Rng& rng);

/// Stateful channel for sequential use inside a single simulated run.
class GilbertElliottChannel {
 public:
  GilbertElliottChannel(const ChannelParams& params, ChannelState initial, Rng rng)
      : params_(params), state_(initial), rng_(std::move(rng)) {}

  /// Transmits one packet and returns whether it arrived.
  bool transmit() {
    const auto r = step(params_, state_, rng_);
    state_ = r.state;
    return r.received;
  }

  ChannelState state() const noexcept { return state_; }
  const ChannelParams& params() const noexcept { return params_; }

 private:
  ChannelParams params_;
  ChannelState state_;
  Rng rng_;
};

/// Loss pattern: element i is true when packet i was lost.
using LossPattern = std::vector<bool>;

/// n consecutive transmissions. `initial` is the state preceding packet 0;
/// when absent it is drawn from the stationary distribution.
LossPattern simulate_pattern(const ChannelParams& params, std::size_t n,
                             std::optional<ChannelState> initial, std::uint64_t seed);

/// Fraction of lost packets (0 for an empty pattern).
double empirical_plr(const LossPattern& pattern);

/// Mean length of maximal runs of losses (0 when nothing was lost).
double empirical_abl(const LossPattern& pattern);

}  // namespace ulp
