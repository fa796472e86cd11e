#include "ulp/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ulp/error.hpp"

namespace ulp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

template <typename T>
T number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
    throw Error(ErrorKind::Config, fmt::format("{}: cannot parse '{}' as a number", key, value));
  }
  return out;
}

bool boolean(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorKind::Config, fmt::format("{}: expected true/false, got '{}'", key, value));
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    out.push_back(number<std::uint64_t>("seeds", item));
  }
  if (out.empty()) throw Error(ErrorKind::Config, "seed list is empty");
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    out.push_back(number<double>("list", item));
  }
  if (out.empty()) throw Error(ErrorKind::Config, "empty list");
  return out;
}

std::vector<ChannelConfig> parse_channel_list(std::string_view text) {
  std::vector<ChannelConfig> out;
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 3) {
      throw Error(ErrorKind::Config, fmt::format("channels: expected name:plr:abl, got '{}'", item));
    }
    ChannelConfig c;
    c.name = std::string(parts[0]);
    c.plr = number<double>("channels.plr", parts[1]);
    c.abl = number<double>("channels.abl", parts[2]);
    out.push_back(std::move(c));
  }
  if (out.empty()) throw Error(ErrorKind::Config, "channel list is empty");
  return out;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  auto& g = c.generator;
  auto size_dist = [&](std::string_view v) {
    if (v == "truncated_normal") return SizeDistribution::TruncatedNormal;
    if (v == "lognormal") return SizeDistribution::LogNormal;
    throw Error(ErrorKind::Config, fmt::format("size_distribution: unknown '{}'", v));
  };

  if (key == "trace_file") {
    if (value.empty()) {
      c.trace_file.reset();
    } else {
      c.trace_file = std::filesystem::path(std::string(value));
    }
  } else if (key == "gop_length") {
    g.gop.gop_length = number<std::uint32_t>(key, value);
  } else if (key == "b_run") {
    g.gop.b_run = number<std::uint32_t>(key, value);
  } else if (key == "n_gops") {
    g.n_gops = number<std::size_t>(key, value);
  } else if (key == "framerate") {
    g.framerate = number<double>(key, value);
  } else if (key == "trace_seed") {
    g.seed = number<std::uint64_t>(key, value);
  } else if (key == "size_i_mean") {
    g.sizes.i.mean = number<double>(key, value);
  } else if (key == "size_i_stddev") {
    g.sizes.i.stddev = number<double>(key, value);
  } else if (key == "size_p_mean") {
    g.sizes.p.mean = number<double>(key, value);
  } else if (key == "size_p_stddev") {
    g.sizes.p.stddev = number<double>(key, value);
  } else if (key == "size_b_mean") {
    g.sizes.b.mean = number<double>(key, value);
  } else if (key == "size_b_stddev") {
    g.sizes.b.stddev = number<double>(key, value);
  } else if (key == "size_distribution") {
    const auto d = size_dist(value);
    g.sizes.i.distribution = g.sizes.p.distribution = g.sizes.b.distribution = d;
  } else if (key == "channel_name") {
    c.channel.name = std::string(value);
  } else if (key == "plr") {
    c.channel.plr = number<double>(key, value);
  } else if (key == "abl") {
    c.channel.abl = number<double>(key, value);
  } else if (key == "seed") {
    c.seeds = {number<std::uint64_t>(key, value)};
  } else if (key == "seeds" || key == "seed_list") {
    c.seeds = parse_seed_list(value);
  } else if (key == "initial_state") {
    if (value == "G") {
      c.channel.initial_state = ChannelState::G;
    } else if (value == "B") {
      c.channel.initial_state = ChannelState::B;
    } else if (value == "stationary") {
      c.channel.initial_state.reset();
    } else {
      throw Error(ErrorKind::Config, fmt::format("initial_state: expected G, B or stationary, got '{}'", value));
    }
  } else if (key == "scheme") {
    c.scheme = parse_scheme(value);
  } else if (key == "redundancy_rate") {
    c.redundancy_rate = number<double>(key, value);
  } else if (key == "r_protection") {
    c.r_protection = number<double>(key, value);
  } else if (key == "p_coverage") {
    c.p_coverage = number<double>(key, value);
  } else if (key == "D" || key == "rows_d") {
    c.fec.rows_d = number<std::uint32_t>(key, value);
  } else if (key == "L" || key == "cols_l") {
    c.fec.cols_l = number<std::uint32_t>(key, value);
  } else if (key == "n_frames_dfs") {
    c.n_frames_dfs = number<std::size_t>(key, value);
  } else if (key == "k1_i") {
    c.distortion.k1_i = number<double>(key, value);
  } else if (key == "k1_p") {
    c.distortion.k1_p = number<double>(key, value);
  } else if (key == "k1_b") {
    c.distortion.k1_b = number<double>(key, value);
  } else if (key == "k2") {
    c.distortion.k2 = number<double>(key, value);
  } else if (key == "k3") {
    c.distortion.k3 = number<double>(key, value);
  } else if (key == "packet_bytes") {
    c.packet_bytes = number<std::size_t>(key, value);
  } else if (key == "fec_estimate_window") {
    c.fec_estimate_window = number<std::size_t>(key, value);
  } else if (key == "fec_lossless") {
    c.fec_lossless = boolean(key, value);
  } else if (key == "jobs") {
    c.jobs = number<unsigned>(key, value);
  } else {
    throw Error(ErrorKind::Config, fmt::format("unknown configuration key '{}'", key));
  }
}

void apply_setting(SweepConfig& sweep, std::string_view key, std::string_view value) {
  if (key == "schemes") {
    sweep.schemes.clear();
    for (auto s : split(value, ',')) {
      if (!s.empty()) sweep.schemes.push_back(parse_scheme(s));
    }
    if (sweep.schemes.empty()) throw Error(ErrorKind::Config, "schemes: empty list");
  } else if (key == "redundancy_rates") {
    sweep.redundancy_rates = parse_double_list(value);
  } else if (key == "channels") {
    sweep.channels = parse_channel_list(value);
  } else {
    apply_setting(sweep.base, key, value);
  }
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig sweep;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config, fmt::format("config line {}: expected key=value", line_no));
    }
    try {
      apply_setting(sweep, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  return sweep;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  auto cfg = parse_config(buf.str());
  // Relative trace paths are resolved against the config file's directory.
  auto& tf = cfg.base.trace_file;
  if (tf && tf->is_relative()) tf = path.parent_path() / *tf;
  return cfg;
}

}  // namespace ulp
