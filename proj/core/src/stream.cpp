#include "ulp/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "ulp/error.hpp"
#include "ulp/rng.hpp"

namespace ulp {

char to_char(FrameType t) noexcept {
  switch (t) {
    case FrameType::I: return 'I';
    case FrameType::P: return 'P';
    case FrameType::B: return 'B';
  }
  return '?';
}

std::string_view to_string(FrameType t) noexcept {
  switch (t) {
    case FrameType::I: return "I";
    case FrameType::P: return "P";
    case FrameType::B: return "B";
  }
  return "?";
}

std::uint64_t FrameTrace::total_packets() const noexcept {
  std::uint64_t n = 0;
  for (const auto& f : frames) n += f.size_packets;
  return n;
}

const TypeSizeModel& SizeModel::of(FrameType t) const noexcept {
  switch (t) {
    case FrameType::I: return i;
    case FrameType::P: return p;
    case FrameType::B: return b;
  }
  return b;
}

namespace {

std::uint32_t draw_size(const TypeSizeModel& m, Rng& rng) {
  double x = m.mean;
  if (m.stddev > 0.0) {
    switch (m.distribution) {
      case SizeDistribution::TruncatedNormal: {
        // Rejection keeps the lower tail above zero; for the profiles in use
        // it practically never triggers.
        for (int attempt = 0; attempt < 1000; ++attempt) {
          const double v = m.mean + m.stddev * rng.normal();
          if (v > 0.0) {
            x = v;
            break;
          }
        }
        break;
      }
      case SizeDistribution::LogNormal: {
        const double var_ratio = (m.stddev * m.stddev) / (m.mean * m.mean);
        const double s2 = std::log1p(var_ratio);
        const double mu = std::log(m.mean) - 0.5 * s2;
        x = std::exp(mu + std::sqrt(s2) * rng.normal());
        break;
      }
    }
  }
  return static_cast<std::uint32_t>(std::max(1.0, std::round(x)));
}

void check_model(const TypeSizeModel& m, char label) {
  if (!(m.mean >= 1.0)) {
    throw Error(ErrorKind::Config, fmt::format("mean size of {}-frames must be >= 1 packet, got {}", label, m.mean));
  }
  if (!(m.stddev >= 0.0)) {
    throw Error(ErrorKind::Config, fmt::format("size stddev of {}-frames must be >= 0, got {}", label, m.stddev));
  }
}

}  // namespace

FrameTrace generate_trace(const GopSpec& gop, std::size_t n_gops, const SizeModel& sizes,
                          double framerate, std::uint64_t seed) {
  if (gop.gop_length < 1) throw Error(ErrorKind::Config, "gop_length must be >= 1");
  if (gop.b_run >= gop.gop_length) {
    throw Error(ErrorKind::Config,
                fmt::format("b_run={} must be smaller than gop_length={}", gop.b_run, gop.gop_length));
  }
  if (!(framerate > 0.0)) throw Error(ErrorKind::Config, "framerate must be positive");
  check_model(sizes.i, 'I');
  check_model(sizes.p, 'P');
  check_model(sizes.b, 'B');

  Rng rng(seed);
  FrameTrace trace;
  trace.gop_length = gop.gop_length;
  trace.framerate = framerate;
  trace.frames.reserve(n_gops * gop.gop_length);
  for (std::size_t g = 0; g < n_gops; ++g) {
    for (std::uint32_t pos = 0; pos < gop.gop_length; ++pos) {
      FrameType type = FrameType::I;
      if (pos > 0) type = pos % (gop.b_run + 1) == 0 ? FrameType::P : FrameType::B;
      FrameMeta f;
      f.index = trace.frames.size();
      f.type = type;
      f.size_packets = draw_size(sizes.of(type), rng);
      f.dist_to_gop_end = gop.gop_length - 1 - pos;
      trace.frames.push_back(f);
    }
  }
  return trace;
}

std::vector<Dfs> segment_dfs(const FrameTrace& trace, std::size_t n_frames_dfs) {
  if (n_frames_dfs < 1) throw Error(ErrorKind::Config, "n_frames_dfs must be >= 1");
  std::vector<Dfs> out;
  const std::span<const FrameMeta> all(trace.frames);
  for (std::size_t begin = 0; begin < all.size(); begin += n_frames_dfs) {
    const auto window = all.subspan(begin, std::min(n_frames_dfs, all.size() - begin));
    const bool has_i = std::any_of(window.begin(), window.end(),
                                   [](const FrameMeta& f) { return f.type == FrameType::I; });
    out.push_back({window, has_i ? DfsKind::IDfs : DfsKind::PBDfs});
  }
  return out;
}

IFrameSizeStats estimate_iframe_stats(const FrameTrace& trace) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : trace.frames) {
    if (f.type != FrameType::I) continue;
    sum += f.size_packets;
    ++n;
  }
  if (n < 2) {
    throw Error(ErrorKind::InsufficientData,
                fmt::format("I-frame size statistics need at least 2 I-frames, trace has {}", n));
  }
  const double mu = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& f : trace.frames) {
    if (f.type != FrameType::I) continue;
    const double d = f.size_packets - mu;
    ss += d * d;
  }
  return {mu, std::sqrt(ss / static_cast<double>(n - 1))};
}

void validate_trace(const FrameTrace& trace) {
  if (trace.gop_length < 1) throw Error(ErrorKind::Input, "gop_length must be >= 1");
  for (std::size_t i = 0; i < trace.frames.size(); ++i) {
    const auto& f = trace.frames[i];
    const auto pos = static_cast<std::uint32_t>(i % trace.gop_length);
    if (f.index != i) {
      throw Error(ErrorKind::Input, fmt::format("frame {}: index {} is not contiguous", i, f.index));
    }
    if (f.size_packets < 1) throw Error(ErrorKind::Input, fmt::format("frame {}: size_packets must be >= 1", i));
    if ((f.type == FrameType::I) != (pos == 0)) {
      throw Error(ErrorKind::Input, fmt::format("frame {}: I-frames must sit exactly at GOP starts", i));
    }
    if (f.dist_to_gop_end != trace.gop_length - 1 - pos) {
      throw Error(ErrorKind::Input,
                  fmt::format("frame {}: dist_to_gop_end {} inconsistent with gop_length {}", i,
                              f.dist_to_gop_end, trace.gop_length));
    }
  }
}

std::string format_trace(const FrameTrace& trace) {
  std::string out = fmt::format("#framerate={} gop_length={}\n", trace.framerate, trace.gop_length);
  for (const auto& f : trace.frames) {
    out += fmt::format("{},{},{},{}\n", f.index, to_char(f.type), f.size_packets, f.dist_to_gop_end);
  }
  return out;
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::Parse, fmt::format("trace line {}: {}", line, msg));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

void parse_header(std::string_view line, FrameTrace& trace) {
  if (line.empty() || line.front() != '#') parse_fail(1, "missing '#framerate=<fps> gop_length=<n>' header");
  line.remove_prefix(1);
  bool have_rate = false;
  bool have_gop = false;
  while (!line.empty()) {
    const auto sp = line.find(' ');
    auto token = line.substr(0, sp);
    line = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp + 1));
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) parse_fail(1, fmt::format("malformed header token '{}'", token));
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    if (key == "framerate") {
      if (!parse_number(value, trace.framerate) || !(trace.framerate > 0.0)) {
        parse_fail(1, fmt::format("invalid framerate '{}'", value));
      }
      have_rate = true;
    } else if (key == "gop_length") {
      if (!parse_number(value, trace.gop_length) || trace.gop_length < 1) {
        parse_fail(1, fmt::format("invalid gop_length '{}'", value));
      }
      have_gop = true;
    } else {
      parse_fail(1, fmt::format("unknown header key '{}'", key));
    }
  }
  if (!have_rate || !have_gop) parse_fail(1, "header must declare framerate and gop_length");
}

}  // namespace

FrameTrace parse_trace(std::string_view text) {
  FrameTrace trace;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!header_seen) {
      parse_header(line, trace);
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::string_view fields[4];
    std::size_t n = 0;
    for (;;) {
      const auto comma = line.find(',');
      if (n == 4) parse_fail(line_no, "expected 4 comma-separated fields");
      fields[n++] = trim(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (n != 4) parse_fail(line_no, "expected 4 comma-separated fields");

    FrameMeta f;
    if (!parse_number(fields[0], f.index)) parse_fail(line_no, fmt::format("invalid index '{}'", fields[0]));
    if (f.index != trace.frames.size()) {
      parse_fail(line_no, fmt::format("index {} breaks contiguity (expected {})", f.index, trace.frames.size()));
    }
    if (fields[1] == "I") {
      f.type = FrameType::I;
    } else if (fields[1] == "P") {
      f.type = FrameType::P;
    } else if (fields[1] == "B") {
      f.type = FrameType::B;
    } else {
      parse_fail(line_no, fmt::format("invalid frame type '{}'", fields[1]));
    }
    if (!parse_number(fields[2], f.size_packets) || f.size_packets < 1) {
      parse_fail(line_no, fmt::format("invalid size_packets '{}'", fields[2]));
    }
    if (!parse_number(fields[3], f.dist_to_gop_end)) {
      parse_fail(line_no, fmt::format("invalid dist_to_gop_end '{}'", fields[3]));
    }
    trace.frames.push_back(f);
  }
  if (!header_seen) parse_fail(1, "empty file: missing header");
  return trace;
}

void save_trace(const FrameTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot open '{}' for writing", path.string()));
  out << format_trace(trace);
  if (!out) throw Error(ErrorKind::Io, fmt::format("failed writing '{}'", path.string()));
}

FrameTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open trace '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

}  // namespace ulp
