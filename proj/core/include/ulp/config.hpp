#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ulp/experiment.hpp"

namespace ulp {

/// Applies one `key=value` setting. Recognised keys:
///
///   trace:     trace_file, gop_length, b_run, n_gops, framerate, trace_seed,
///              size_{i,p,b}_mean, size_{i,p,b}_stddev, size_distribution
///   channel:   channel_name, plr, abl, seed, initial_state (G|B|stationary)
///   scheme:    scheme, redundancy_rate, r_protection, p_coverage, D, L,
///              n_frames_dfs, k1_i, k1_p, k1_b, k2, k3
///   harness:   packet_bytes, fec_estimate_window, seeds, fec_lossless, jobs
///   sweep:     schemes, redundancy_rates, channels (name:plr:abl,...)
///
/// The ExperimentConfig overload rejects the sweep keys.
/// Throws Error{Config} for unknown keys or unparsable values.
void apply_setting(SweepConfig& sweep, std::string_view key, std::string_view value);
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment. Errors carry the line number.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

std::vector<std::uint64_t> parse_seed_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);
std::vector<ChannelConfig> parse_channel_list(std::string_view text);

}  // namespace ulp
