#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ulp/budget.hpp"
#include "ulp/channel.hpp"
#include "ulp/loss_model.hpp"
#include "ulp/schemes.hpp"
#include "ulp/stream.hpp"

namespace ulp {

struct TraceGenSpec {
  GopSpec gop{};
  std::size_t n_gops = 250;
  SizeModel sizes{};
  double framerate = 25.0;
  std::uint64_t seed = 1;
};

struct ChannelConfig {
  std::string name;  // label used in reports; derived from plr/abl when empty
  double plr = 0.01;
  double abl = 10.0;
  std::optional<ChannelState> initial_state;  // stationary draw when absent

  std::string label() const;
};

struct ExperimentConfig {
  std::optional<std::filesystem::path> trace_file;  // overrides the generator
  TraceGenSpec generator{};
  ChannelConfig channel{};
  Scheme scheme = Scheme::VaUlp;
  double redundancy_rate = 0.05;          // fraction of the measured stream bitrate
  std::optional<double> r_protection;     // absolute bit/s, wins over redundancy_rate
  double p_coverage = 90.0;
  FecMatrixConfig fec{4, 20};
  std::size_t n_frames_dfs = 5;
  DistortionConstants distortion{};
  std::size_t packet_bytes = 1356;        // on-wire size of every data packet
  std::size_t fec_estimate_window = 100;  // data packets averaged for l_pkt_fec
  std::vector<std::uint64_t> seeds{1};
  bool fec_lossless = false;
  unsigned jobs = 0;                      // worker threads; 0 = hardware concurrency
};

/// Packet and frame tallies for one frame type (or all types together).
struct TypeCounters {
  std::uint64_t sent_packets = 0;
  std::uint64_t received_packets = 0;
  std::uint64_t lost_packets = 0;
  std::uint64_t recovered_packets = 0;
  std::uint64_t protected_packets = 0;
  std::uint64_t frames = 0;
  std::uint64_t frames_effectively_lost = 0;

  /// recovered / lost; 1 when nothing was lost.
  double recovery_rate() const noexcept;
  bool no_loss() const noexcept { return lost_packets == 0; }

  TypeCounters& operator+=(const TypeCounters& o) noexcept;
  bool operator==(const TypeCounters&) const = default;
};

struct RunMetrics {
  std::uint64_t seed = 0;
  std::string scheme;
  std::string channel;
  double redundancy = 0.0;  // requested protection rate / measured stream rate

  std::array<TypeCounters, 3> by_type{};  // indexed by FrameType
  TypeCounters overall{};
  double distortion_proxy = 0.0;

  std::uint64_t fec_packets_sent = 0;
  std::uint64_t fec_packets_lost = 0;
  double fec_bits_sent = 0.0;
  double fec_bitrate = 0.0;
  double budget_bits = 0.0;  // sum of per-window nominal budgets
  double r_protection = 0.0;
  double stream_bitrate = 0.0;
  double duration_s = 0.0;

  const TypeCounters& of(FrameType t) const noexcept { return by_type[static_cast<std::size_t>(t)]; }
  bool operator==(const RunMetrics&) const = default;
};

/// Everything a seeded run needs, resolved once per configuration.
struct PreparedExperiment {
  ExperimentConfig config;
  FrameTrace trace;
  ProtectionConfig protection;
  ChannelParams channel;
  std::optional<IFrameSizeStats> iframe_stats;
  Reservation reservation{};
  double stream_bitrate = 0.0;
};

/// Loads or generates the trace and resolves rates and budgets. Errors from
/// the trace, channel or budget layers propagate with context prepended.
PreparedExperiment prepare(const ExperimentConfig& config);

/// Same as prepare() but reuses an already loaded trace.
PreparedExperiment prepare(const ExperimentConfig& config, FrameTrace trace);

FrameTrace load_or_generate_trace(const ExperimentConfig& config);

/// One Monte-Carlo repetition: decide per window, FEC-encode the chosen
/// packets, push data and parity through the channel, recover, tally.
RunMetrics run_seed(const PreparedExperiment& prepared, std::uint64_t seed);

/// All configured seeds, in seed-list order, possibly in parallel.
std::vector<RunMetrics> run(const PreparedExperiment& prepared);
std::vector<RunMetrics> run(const ExperimentConfig& config);

struct SweepConfig {
  ExperimentConfig base{};
  std::vector<Scheme> schemes{Scheme::VaUlp, Scheme::Mp, Scheme::Up};
  std::vector<double> redundancy_rates{0.05, 0.10, 0.15, 0.20};
  std::vector<ChannelConfig> channels;  // empty: base.channel only
};

/// Cartesian product channels x redundancy rates x schemes, all seeds each.
std::vector<RunMetrics> sweep(const SweepConfig& config);

}  // namespace ulp
