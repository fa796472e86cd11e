#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ulp/error.hpp"
#include "ulp/stream.hpp"

namespace ulp {

/// Header-extension profile identifying the frame label ("VA").
inline constexpr std::uint16_t kFrameLabelProfile = 0x5641;
inline constexpr std::size_t kRtpFixedHeaderSize = 12;
/// Extension header (profile + length) plus one 32-bit label word.
inline constexpr std::size_t kFrameLabelExtSize = 8;
inline constexpr std::uint32_t kMaxDistToGopEnd = (1u << 12) - 1;
inline constexpr std::uint32_t kRtpClockRate = 90000;

/// Per-packet frame label. Wire layout of the label word, MSB first:
///   frame_type:2 | begin:1 | end:1 | dist_to_gop_end:12 | reserved:16
struct FrameLabelExt {
  FrameType frame_type = FrameType::I;
  bool begin = false;
  bool end = false;
  std::uint16_t dist_to_gop_end = 0;

  bool operator==(const FrameLabelExt&) const = default;
};

struct RtpPacket {
  std::uint16_t seq = 0;
  std::uint32_t timestamp = 0;
  std::uint32_t ssrc = 0;
  bool marker = false;
  std::uint8_t payload_type = 96;
  std::optional<FrameLabelExt> extension;
  std::vector<std::uint8_t> payload;

  bool operator==(const RtpPacket&) const = default;
};

/// RTP v2 serialization in network byte order. X is set iff an extension
/// is present; CC is always 0.
std::vector<std::uint8_t> serialize(const RtpPacket& pkt);

enum class RtpParseFault : std::uint8_t {
  Truncated,
  BadVersion,
  MissingExtension,
  TruncatedExtension,
  UnknownProfile,
  BadExtensionLength,
  BadFrameType,
};

class RtpParseError : public Error {
 public:
  RtpParseError(RtpParseFault fault, const std::string& what)
      : Error(ErrorKind::Parse, what), fault_(fault) {}
  RtpParseFault fault() const noexcept { return fault_; }

 private:
  RtpParseFault fault_;
};

/// Header fields a downstream module needs to make frame-level decisions.
struct ParsedHeader {
  std::uint16_t seq = 0;
  std::uint32_t timestamp = 0;
  std::uint32_t ssrc = 0;
  bool marker = false;
  std::uint8_t payload_type = 0;
  FrameType frame_type = FrameType::I;
  bool begin = false;
  bool end = false;
  std::uint16_t dist_to_gop_end = 0;
  std::size_t payload_offset = 0;
};

/// Parses a data packet carrying the frame label. Throws RtpParseError.
ParsedHeader parse_header(std::span<const std::uint8_t> bytes);

/// Full inverse of serialize(); the extension is optional here.
RtpPacket parse_packet(std::span<const std::uint8_t> bytes);

/// 90 kHz timestamp of a frame index, rounded to nearest.
std::uint32_t frame_timestamp(std::size_t frame_index, double framerate);

/// Deterministic filler byte at position i of the payload of packet seq.
constexpr std::uint8_t filler_byte(std::uint16_t seq, std::size_t i) noexcept {
  return static_cast<std::uint8_t>((seq * 131u + i * 7u + (seq >> 8)) & 0xFFu);
}

/// Splits one frame into size_packets RTP packets, all labelled with the
/// frame's type and GOP distance; begin/end mark the first/last packet and
/// the marker bit mirrors end. Throws Error{EncodingRange} when the distance
/// does not fit 12 bits.
std::vector<RtpPacket> packetize_frame(const FrameMeta& frame, std::uint32_t ssrc,
                                       std::uint16_t start_seq, std::uint32_t timestamp,
                                       std::size_t payload_bytes, std::uint8_t payload_type = 96);

/// Packetizes a whole trace with consecutive (wrapping) sequence numbers.
std::vector<RtpPacket> packetize_trace(const FrameTrace& trace, std::uint32_t ssrc,
                                       std::uint16_t start_seq, std::size_t payload_bytes);

/// Rebuilds frame metadata from parsed headers alone: frames are delimited
/// by begin/end flags and sized by counting packets. Throws Error{Input} on
/// inconsistent labelling.
std::vector<FrameMeta> frames_from_headers(std::span<const ParsedHeader> headers);

}  // namespace ulp
