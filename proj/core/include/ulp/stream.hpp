#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace ulp {

enum class FrameType : std::uint8_t { I = 0, P = 1, B = 2 };

char to_char(FrameType t) noexcept;
std::string_view to_string(FrameType t) noexcept;

/// Coding features of one frame: type, size in RTP data packets, and the
/// number of frames that follow it inside its GOP.
struct FrameMeta {
  std::size_t index = 0;
  FrameType type = FrameType::I;
  std::uint32_t size_packets = 1;
  std::uint32_t dist_to_gop_end = 0;

  bool operator==(const FrameMeta&) const = default;
};

struct FrameTrace {
  std::vector<FrameMeta> frames;
  std::uint32_t gop_length = 1;
  double framerate = 25.0;

  bool operator==(const FrameTrace&) const = default;

  std::uint64_t total_packets() const noexcept;
};

enum class DfsKind : std::uint8_t { IDfs, PBDfs };

/// Decision frame set: a window of consecutive frames decided together.
/// `frames` views into the trace it was segmented from.
struct Dfs {
  std::span<const FrameMeta> frames;
  DfsKind kind = DfsKind::PBDfs;
};

struct GopSpec {
  std::uint32_t gop_length = 12;
  std::uint32_t b_run = 2;
};

enum class SizeDistribution : std::uint8_t { TruncatedNormal, LogNormal };

struct TypeSizeModel {
  double mean = 1.0;
  double stddev = 0.0;
  SizeDistribution distribution = SizeDistribution::TruncatedNormal;
};

/// Per-type frame size model, in packets. Defaults describe an IBBP stream of
/// roughly 12 Mbit/s at 25 fps with 1356-byte packets.
struct SizeModel {
  TypeSizeModel i{124.0, 18.6};
  TypeSizeModel p{62.0, 9.3};
  TypeSizeModel b{28.0, 4.2};

  const TypeSizeModel& of(FrameType t) const noexcept;
};

/// Synthetic trace: per GOP the pattern I (B^b_run P)* truncated to
/// gop_length, sizes drawn per type. Deterministic for a seed.
FrameTrace generate_trace(const GopSpec& gop, std::size_t n_gops, const SizeModel& sizes,
                          double framerate, std::uint64_t seed);

/// Non-overlapping windows of n_frames_dfs frames; the last may be short.
std::vector<Dfs> segment_dfs(const FrameTrace& trace, std::size_t n_frames_dfs);

struct IFrameSizeStats {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Sample mean and (n-1) standard deviation of I-frame sizes in packets.
IFrameSizeStats estimate_iframe_stats(const FrameTrace& trace);

/// Checks GOP structure: contiguous indices, I exactly at GOP starts and
/// dist_to_gop_end counting down to 0. Throws Error{Input} on violation.
void validate_trace(const FrameTrace& trace);

void save_trace(const FrameTrace& trace, const std::filesystem::path& path);
FrameTrace load_trace(const std::filesystem::path& path);

// String forms of the trace file, used by the file functions above.
std::string format_trace(const FrameTrace& trace);
FrameTrace parse_trace(std::string_view text);

}  // namespace ulp
