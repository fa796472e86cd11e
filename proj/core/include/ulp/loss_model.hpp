#pragma once

#include <cstddef>

#include "ulp/channel.hpp"
#include "ulp/fec.hpp"
#include "ulp/stream.hpp"

namespace ulp {

/// Weights of the frame-loss distortion model. Defaults are illustrative;
/// only their ordering (I > P > B) carries meaning.
struct DistortionConstants {
  double k1_i = 100.0;
  double k1_p = 40.0;
  double k1_b = 10.0;
  double k2 = 2.0;   // per frame of distance to the GOP end
  double k3 = 0.1;   // per packet of frame size

  double k1(FrameType t) const noexcept;
};

/// Throws Error{ParameterDomain} unless k1_i > k1_p > k1_b >= 0 and k2, k3 >= 0.
void validate(const DistortionConstants& k);

/// Distortion when the frame cannot be fully reconstructed:
/// K1(type) + K2 * dist_to_gop_end + K3 * size.
double distortion(const FrameMeta& frame, const DistortionConstants& k);

/// P(at least one of z consecutive packets lost | previous packet in state s).
double p_loss_unprotected(ChannelState s, std::size_t z, const ChannelParams& ch);

/// Probability that a D*L matrix sees exactly one loss burst, of length n,
/// given the state of the packet before it. Throws Error{ParameterDomain}
/// unless 1 <= n <= D*L.
double p_burst(ChannelState s, std::size_t n, const FecMatrixConfig& cfg, const ChannelParams& ch);

/// Probability of a single burst longer than L inside one matrix.
double p_w_matrix(ChannelState s, const FecMatrixConfig& cfg, const ChannelParams& ch);

/// n_matrices(z) * p_w_matrix(s), clamped to 1.
double p_loss_protected(ChannelState s, std::size_t z, const FecMatrixConfig& cfg, const ChannelParams& ch);

}  // namespace ulp
