#include "ulp/experiment.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "ulp/error.hpp"
#include "ulp/fec.hpp"

namespace ulp {

std::string ChannelConfig::label() const {
  if (!name.empty()) return name;
  return fmt::format("plr{}_abl{}", plr, abl);
}

double TypeCounters::recovery_rate() const noexcept {
  if (lost_packets == 0) return 1.0;
  return static_cast<double>(recovered_packets) / static_cast<double>(lost_packets);
}

TypeCounters& TypeCounters::operator+=(const TypeCounters& o) noexcept {
  sent_packets += o.sent_packets;
  received_packets += o.received_packets;
  lost_packets += o.lost_packets;
  recovered_packets += o.recovered_packets;
  protected_packets += o.protected_packets;
  frames += o.frames;
  frames_effectively_lost += o.frames_effectively_lost;
  return *this;
}

FrameTrace load_or_generate_trace(const ExperimentConfig& config) {
  if (config.trace_file) return load_trace(*config.trace_file);
  const auto& g = config.generator;
  return generate_trace(g.gop, g.n_gops, g.sizes, g.framerate, g.seed);
}

PreparedExperiment prepare(const ExperimentConfig& config) {
  return prepare(config, load_or_generate_trace(config));
}

PreparedExperiment prepare(const ExperimentConfig& config, FrameTrace trace) {
  if (trace.frames.empty()) throw Error(ErrorKind::Config, "trace contains no frames");
  if (config.packet_bytes == 0) throw Error(ErrorKind::Config, "packet_bytes must be positive");
  if (config.seeds.empty()) throw Error(ErrorKind::Config, "seed list is empty");

  PreparedExperiment p;
  p.config = config;

  try {
    p.channel = derive_params(config.channel.plr, config.channel.abl);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("channel '{}': {}", config.channel.label(), e.what()));
  }

  const double data_bits = static_cast<double>(trace.total_packets()) * static_cast<double>(config.packet_bytes) * 8.0;
  const double duration = static_cast<double>(trace.frames.size()) / trace.framerate;
  p.stream_bitrate = data_bits / duration;

  auto& prot = p.protection;
  if (config.r_protection) {
    prot.r_protection = *config.r_protection;
  } else {
    if (!(config.redundancy_rate > 0.0)) {
      throw Error(ErrorKind::Config, fmt::format("redundancy_rate must be > 0, got {}", config.redundancy_rate));
    }
    prot.r_protection = config.redundancy_rate * p.stream_bitrate;
  }
  prot.framerate = trace.framerate;
  prot.n_frames_dfs = config.n_frames_dfs;
  prot.fec = config.fec;
  prot.p_coverage = config.p_coverage;
  prot.l_pkt_data = static_cast<double>(config.packet_bytes) * 8.0;
  {
    const std::size_t window = std::min<std::size_t>(config.fec_estimate_window, trace.total_packets());
    const std::vector<std::size_t> sizes(std::max<std::size_t>(window, 1), config.packet_bytes);
    prot.l_pkt_fec = estimate_fec_packet_bits(sizes, config.fec_estimate_window);
  }
  try {
    validate(prot);
    validate(config.distortion);
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("protection config: {}", e.what()));
  }

  if (config.scheme == Scheme::VaUlp) {
    try {
      p.iframe_stats = estimate_iframe_stats(trace);
      p.reservation = reservation(prot, *p.iframe_stats, static_cast<double>(trace.gop_length));
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("va_ulp budget reservation: {}", e.what()));
    }
  }
  p.trace = std::move(trace);
  return p;
}

namespace {

/// A run of consecutive data packets protected as one FEC block.
struct Block {
  std::size_t first = 0;  // packet offset inside the window
  std::size_t count = 0;
  std::vector<FecColumn> layout;
};

std::vector<Block> choose_blocks(const PreparedExperiment& p, const Dfs& dfs, ChannelState s,
                                 std::span<const std::size_t> frame_offset, BudgetState& budget) {
  const auto& cfg = p.config;
  const auto& prot = p.protection;
  const std::size_t n = dfs.frames.size();
  std::vector<Block> blocks;

  auto protect_frames = [&](const Policy& pi) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pi.protect[i]) blocks.push_back({frame_offset[i], dfs.frames[i].size_packets, {}});
    }
  };

  switch (cfg.scheme) {
    case Scheme::VaUlp: {
      const auto d = decide_va_ulp(make_dfs_state(dfs, s), budget, cfg.distortion, prot, p.channel);
      budget = d.budget;
      protect_frames(d.policy);
      break;
    }
    case Scheme::Mp: {
      const auto nominal = nominal_budget(prot, n);
      protect_frames(decide_mp(dfs.frames, nominal.n_pkt_rtp, prot.fec.rows_d));
      break;
    }
    case Scheme::Up: {
      const auto nominal = nominal_budget(prot, n);
      const std::size_t k = decide_up(frame_offset[n], nominal.n_pkt_rtp, prot.fec.rows_d);
      if (k > 0) blocks.push_back({0, k, {}});
      break;
    }
  }
  for (auto& b : blocks) b.layout = column_layout(b.count, prot.fec);
  return blocks;
}

}  // namespace

RunMetrics run_seed(const PreparedExperiment& p, std::uint64_t seed) {
  const auto& cfg = p.config;
  RunMetrics m;
  m.seed = seed;
  m.scheme = std::string(to_string(cfg.scheme));
  m.channel = cfg.channel.label();
  m.r_protection = p.protection.r_protection;
  m.stream_bitrate = p.stream_bitrate;
  m.redundancy = cfg.r_protection ? p.protection.r_protection / p.stream_bitrate : cfg.redundancy_rate;
  m.duration_s = static_cast<double>(p.trace.frames.size()) / p.trace.framerate;

  Rng rng = Rng(seed).split(0);
  const ChannelState initial = cfg.channel.initial_state ? *cfg.channel.initial_state
                                                         : draw_stationary_state(p.channel, rng);
  GilbertElliottChannel channel(p.channel, initial, rng);

  BudgetState budget = initial_budget_state(p.protection, p.reservation);
  const double fec_packet_bits = static_cast<double>(cfg.packet_bytes + kFecHeaderSize) * 8.0;

  std::vector<std::size_t> frame_offset;
  std::vector<bool> lost;
  std::vector<bool> recovered;
  std::vector<bool> covered;

  for (const auto& dfs : segment_dfs(p.trace, p.protection.n_frames_dfs)) {
    const std::size_t n = dfs.frames.size();
    frame_offset.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) frame_offset[i + 1] = frame_offset[i] + dfs.frames[i].size_packets;
    const std::size_t packets = frame_offset[n];
    m.budget_bits += nominal_budget(p.protection, n).n_bit_fec;

    const ChannelState s = channel.state();
    const auto blocks = choose_blocks(p, dfs, s, frame_offset, budget);

    // Parity packets of a matrix go out right after its last data packet.
    struct ParityBurst {
      std::size_t after;  // window packet offset that triggers the burst
      std::size_t block;
      std::size_t col_begin;
      std::size_t col_end;
    };
    std::vector<ParityBurst> bursts;
    std::vector<std::vector<bool>> fec_lost(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& layout = blocks[b].layout;
      fec_lost[b].assign(layout.size(), false);
      std::size_t c = 0;
      for (const auto& span : matrix_spans(blocks[b].count, p.protection.fec)) {
        bursts.push_back({blocks[b].first + span.first + span.size - 1, b, c, c + span.cols});
        c += span.cols;
      }
    }

    lost.assign(packets, false);
    covered.assign(packets, false);
    for (const auto& b : blocks) {
      for (std::size_t k = 0; k < b.count; ++k) covered[b.first + k] = true;
    }
    std::size_t next_burst = 0;
    for (std::size_t k = 0; k < packets; ++k) {
      lost[k] = !channel.transmit();
      while (next_burst < bursts.size() && bursts[next_burst].after == k) {
        const auto& pb = bursts[next_burst++];
        for (std::size_t c = pb.col_begin; c < pb.col_end; ++c) {
          ++m.fec_packets_sent;
          m.fec_bits_sent += fec_packet_bits;
          if (!cfg.fec_lossless && !channel.transmit()) {
            fec_lost[pb.block][c] = true;
            ++m.fec_packets_lost;
          }
        }
      }
    }

    recovered.assign(packets, false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& blk = blocks[b];
      const std::vector<bool> block_lost(lost.begin() + static_cast<std::ptrdiff_t>(blk.first),
                                         lost.begin() + static_cast<std::ptrdiff_t>(blk.first + blk.count));
      const auto rec = recover_mask(blk.layout, block_lost, fec_lost[b]);
      for (std::size_t k = 0; k < blk.count; ++k) recovered[blk.first + k] = rec[k];
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& f = dfs.frames[i];
      auto& t = m.by_type[static_cast<std::size_t>(f.type)];
      bool frame_lost = false;
      for (std::size_t k = frame_offset[i]; k < frame_offset[i + 1]; ++k) {
        ++t.sent_packets;
        if (covered[k]) ++t.protected_packets;
        if (lost[k]) {
          ++t.lost_packets;
          if (recovered[k]) {
            ++t.recovered_packets;
          } else {
            frame_lost = true;
          }
        } else {
          ++t.received_packets;
        }
      }
      ++t.frames;
      if (frame_lost) {
        ++t.frames_effectively_lost;
        m.distortion_proxy += distortion(f, cfg.distortion);
      }
    }
  }

  for (const auto& t : m.by_type) m.overall += t;
  m.fec_bitrate = m.fec_bits_sent / m.duration_s;
  return m;
}

std::vector<RunMetrics> run(const PreparedExperiment& prepared) {
  const auto& seeds = prepared.config.seeds;
  std::vector<RunMetrics> out(seeds.size());
  unsigned jobs = prepared.config.jobs == 0 ? std::thread::hardware_concurrency() : prepared.config.jobs;
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) out[i] = run_seed(prepared, seeds[i]);
    return out;
  }
  // Static striping: worker w handles seeds w, w+jobs, ... Results land in
  // seed-list order, so output does not depend on scheduling.
  std::vector<std::future<void>> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < seeds.size(); i += jobs) out[i] = run_seed(prepared, seeds[i]);
    }));
  }
  for (auto& f : workers) f.get();
  return out;
}

std::vector<RunMetrics> run(const ExperimentConfig& config) { return run(prepare(config)); }

std::vector<RunMetrics> sweep(const SweepConfig& config) {
  const FrameTrace trace = load_or_generate_trace(config.base);
  std::vector<ChannelConfig> channels = config.channels;
  if (channels.empty()) channels.push_back(config.base.channel);

  std::vector<RunMetrics> out;
  for (const auto& ch : channels) {
    for (double rate : config.redundancy_rates) {
      for (Scheme scheme : config.schemes) {
        ExperimentConfig c = config.base;
        c.channel = ch;
        c.redundancy_rate = rate;
        c.r_protection.reset();
        c.scheme = scheme;
        auto runs = run(prepare(c, trace));
        out.insert(out.end(), std::make_move_iterator(runs.begin()), std::make_move_iterator(runs.end()));
      }
    }
  }
  return out;
}

}  // namespace ulp
