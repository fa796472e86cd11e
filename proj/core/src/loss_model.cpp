#include "ulp/loss_model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

double DistortionConstants::k1(FrameType t) const noexcept {
  switch (t) {
    case FrameType::I: return k1_i;
    case FrameType::P: return k1_p;
    case FrameType::B: return k1_b;
  }
  return k1_b;
}

void validate(const DistortionConstants& k) {
  if (!(k.k1_i > k.k1_p && k.k1_p > k.k1_b && k.k1_b >= 0.0)) {
    throw Error(ErrorKind::ParameterDomain,
                fmt::format("distortion constants must satisfy k1_i > k1_p > k1_b >= 0 (got {}, {}, {})", k.k1_i,
                            k.k1_p, k.k1_b));
  }
  if (!(k.k2 >= 0.0 && k.k3 >= 0.0)) throw Error(ErrorKind::ParameterDomain, "k2 and k3 must be >= 0");
}

double distortion(const FrameMeta& frame, const DistortionConstants& k) {
  return k.k1(frame.type) + k.k2 * frame.dist_to_gop_end + k.k3 * frame.size_packets;
}

double p_loss_unprotected(ChannelState s, std::size_t z, const ChannelParams& ch) {
  if (z == 0) return 0.0;
  const double n = static_cast<double>(z);
  if (s == ChannelState::G) return 1.0 - std::pow(ch.p_gg, n);
  return 1.0 - ch.p_bg * std::pow(ch.p_gg, n - 1.0);
}

double p_burst(ChannelState s, std::size_t n, const FecMatrixConfig& cfg, const ChannelParams& ch) {
  validate(cfg);
  const std::size_t m = cfg.capacity();
  if (n < 1 || n > m) {
    throw Error(ErrorKind::ParameterDomain, fmt::format("burst length {} outside [1, {}]", n, m));
  }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  const double head = std::pow(ch.p_bb, dn - 1.0);
  if (s == ChannelState::G) {
    // At n == D*L the p_gg exponent is -1 and cancels against the bracket,
    // which is then exactly p_gg; evaluate the reduced form so p_gg = 0 works.
    if (n == m) return ch.p_gb * head;
    return ch.p_gb * head * std::pow(ch.p_gg, dm - dn - 1.0) * ((dm - dn) * ch.p_bg + ch.p_gg);
  }
  if (n == m) return std::pow(ch.p_bb, dm);
  // Same cancellation one step earlier for the bad-state formula.
  if (n + 1 == m) return ch.p_bg * head * (ch.p_bb + ch.p_gb);
  return ch.p_bg * head * std::pow(ch.p_gg, dm - dn - 2.0) *
         ((dm - dn - 1.0) * ch.p_bg * ch.p_gb + ch.p_bb * ch.p_gg + ch.p_gb * ch.p_gg);
}

double p_w_matrix(ChannelState s, const FecMatrixConfig& cfg, const ChannelParams& ch) {
  double sum = 0.0;
  for (std::size_t n = std::size_t{cfg.cols_l} + 1; n <= cfg.capacity(); ++n) sum += p_burst(s, n, cfg, ch);
  return sum;
}

double p_loss_protected(ChannelState s, std::size_t z, const FecMatrixConfig& cfg, const ChannelParams& ch) {
  if (z == 0) return 0.0;
  return std::min(1.0, static_cast<double>(n_matrices(z, cfg)) * p_w_matrix(s, cfg, ch));
}

}  // namespace ulp
