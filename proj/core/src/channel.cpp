#include "ulp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

ChannelParams ChannelParams::from_transitions(double p_gb, double p_bg) {
  if (!(p_gb >= 0.0 && p_gb <= 1.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("p_gb must lie in [0,1], got {}", p_gb));
  }
  if (!(p_bg >= 0.0 && p_bg <= 1.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("p_bg must lie in [0,1], got {}", p_bg));
  }
  ChannelParams p;
  p.p_gb = p_gb;
  p.p_gg = 1.0 - p_gb;
  p.p_bg = p_bg;
  p.p_bb = 1.0 - p_bg;
  const double denom = p_gb + p_bg;
  p.plr = denom > 0.0 ? p_gb / denom : 0.0;
  p.abl = p_bg > 0.0 ? 1.0 / p_bg : std::numeric_limits<double>::infinity();
  return p;
}

ChannelParams derive_params(double plr, double abl) {
  if (!(plr > 0.0 && plr < 1.0)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("plr must lie in (0,1), got {}", plr));
  }
  if (!(abl >= 1.0) || !std::isfinite(abl)) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("abl must be a finite value >= 1, got {}", abl));
  }
  const double p_bg = 1.0 / abl;
  const double p_gb = plr * p_bg / (1.0 - plr);
  // p_gb reaches 1 exactly at plr = abl/(abl+1); beyond that no chain fits.
  if (p_gb > 1.0 + 1e-12) {
    throw Error(ErrorKind::ParameterDomain,
                fmt::format("plr={} is unreachable with abl={} (requires plr <= abl/(abl+1))", plr, abl));
  }
  ChannelParams p;
  p.p_bg = p_bg;
  p.p_bb = 1.0 - p_bg;
  p.p_gb = std::min(p_gb, 1.0);
  p.p_gg = 1.0 - p.p_gb;
  p.plr = plr;
  p.abl = abl;
  return p;
}

StationaryDist stationary(const ChannelParams& params) {
  const double denom = params.p_gb + params.p_bg;
  if (denom <= 0.0) {
    throw Error(ErrorKind::DegenerateChain,
                "p_gb + p_bg = 0: both states are absorbing, no unique stationary distribution");
  }
  const double p_b = params.p_gb / denom;
  return {1.0 - p_b, p_b};
}

StepResult step(const ChannelParams& params, ChannelState state, Rng& rng) {
  const double stay = state == ChannelState::G ? params.p_gg : params.p_bb;
  ChannelState next = state;
  if (!rng.bernoulli(stay)) {
    next = state == ChannelState::G ? ChannelState::B : ChannelState::G;
  }
  return {next, next == ChannelState::G};
}

ChannelState draw_stationary_state(const ChannelParams& params, Rng& rng) {
  return rng.bernoulli(stationary(params).p_b) ? ChannelState::B : ChannelState::G;
}

LossPattern simulate_pattern(const ChannelParams& params, std::size_t n,
                             std::optional<ChannelState> initial, std::uint64_t seed) {
  Rng rng(seed);
  ChannelState state = initial ? *initial : draw_stationary_state(params, rng);
  LossPattern pattern(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = step(params, state, rng);
    state = r.state;
    pattern[i] = !r.received;
  }
  return pattern;
}

double empirical_plr(const LossPattern& pattern) {
  if (pattern.empty()) return 0.0;
  std::size_t lost = 0;
  for (bool l : pattern) lost += l ? 1 : 0;
  return static_cast<double>(lost) / static_cast<double>(pattern.size());
}

double empirical_abl(const LossPattern& pattern) {
  std::size_t bursts = 0;
  std::size_t lost = 0;
  bool prev = false;
  for (bool l : pattern) {
    if (l) {
      ++lost;
      if (!prev) ++bursts;
    }
    prev = l;
  }
  return bursts == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(bursts);
}

}  // namespace ulp
