#pragma once

// Brute-force reference computations used only by the tests. None of them
// call into the library's probability or search code.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "ulp/channel.hpp"

namespace oracle {

inline double transition(const ulp::ChannelParams& ch, bool from_bad, bool to_bad) {
  if (from_bad) return to_bad ? ch.p_bb : ch.p_bg;
  return to_bad ? ch.p_gb : ch.p_gg;
}

/// Probability of one exact loss pattern of `n` packets (bit i set = packet i
/// lost), given the state of the packet before the first one.
inline double pattern_probability(const ulp::ChannelParams& ch, bool prev_bad, std::uint32_t mask, std::size_t n) {
  double p = 1.0;
  bool s = prev_bad;
  for (std::size_t i = 0; i < n; ++i) {
    const bool lost = (mask >> i) & 1u;
    p *= transition(ch, s, lost);
    s = lost;
  }
  return p;
}

/// Length of the loss run if the pattern holds exactly one, else 0.
inline std::size_t single_run_length(std::uint32_t mask, std::size_t n) {
  std::size_t runs = 0;
  std::size_t length = 0;
  bool prev = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool lost = (mask >> i) & 1u;
    if (lost && !prev) ++runs;
    if (lost) ++length;
    prev = lost;
  }
  return runs == 1 ? length : 0;
}

/// result[n] = P(the m packets contain exactly one loss run, of length n),
/// by summing over all 2^m realizations.
inline std::vector<double> single_burst_distribution(const ulp::ChannelParams& ch, bool prev_bad, std::size_t m) {
  std::vector<double> out(m + 1, 0.0);
  const std::uint32_t limit = 1u << m;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const std::size_t len = single_run_length(mask, m);
    if (len > 0) out[len] += pattern_probability(ch, prev_bad, mask, m);
  }
  return out;
}

/// P(at least one of z packets lost) by forward recursion over the chain.
inline double any_loss_probability(const ulp::ChannelParams& ch, bool prev_bad, std::size_t z) {
  // Probability mass of "all received so far", which ends in state G.
  double all_received = transition(ch, prev_bad, false);
  for (std::size_t i = 1; i < z; ++i) all_received *= ch.p_gg;
  return z == 0 ? 0.0 : 1.0 - all_received;
}

/// erf by its Maclaurin series in long double. Cancellation costs accuracy
/// as |x| grows: about 1e-16 near 0, a few 1e-14 at |x| = 4.
inline double erf_series(double xd) {
  const long double x = xd;
  const long double x2 = x * x;
  long double term = x;  // (-1)^k x^(2k+1) / k!
  long double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= -x2 / static_cast<long double>(k);
    const long double add = term / static_cast<long double>(2 * k + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L) break;
  }
  const long double two_over_sqrt_pi = 1.1283791670955125738961589031215452L;
  return static_cast<double>(two_over_sqrt_pi * sum);
}

}  // namespace oracle
