#include "ulp/rtp.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ulp {

namespace {

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint32_t get32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

std::uint32_t encode_label(const FrameLabelExt& ext) {
  return (static_cast<std::uint32_t>(ext.frame_type) << 30) | (std::uint32_t{ext.begin} << 29) |
         (std::uint32_t{ext.end} << 28) | ((std::uint32_t{ext.dist_to_gop_end} & 0xFFFu) << 16);
}

struct RawHeader {
  ParsedHeader fields;
  bool has_label = false;
  FrameLabelExt label;
};

RawHeader parse_raw(std::span<const std::uint8_t> bytes, bool require_label) {
  if (bytes.size() < kRtpFixedHeaderSize) {
    throw RtpParseError(RtpParseFault::Truncated,
                        fmt::format("RTP packet truncated: {} bytes, need at least 12", bytes.size()));
  }
  const std::uint8_t b0 = bytes[0];
  if ((b0 >> 6) != 2) {
    throw RtpParseError(RtpParseFault::BadVersion, fmt::format("unsupported RTP version {}", b0 >> 6));
  }
  const bool has_ext = (b0 & 0x10) != 0;
  const std::size_t csrc_count = b0 & 0x0F;

  RawHeader raw;
  auto& h = raw.fields;
  h.marker = (bytes[1] & 0x80) != 0;
  h.payload_type = bytes[1] & 0x7F;
  h.seq = get16(bytes, 2);
  h.timestamp = get32(bytes, 4);
  h.ssrc = get32(bytes, 8);

  std::size_t offset = kRtpFixedHeaderSize + 4 * csrc_count;
  if (bytes.size() < offset) {
    throw RtpParseError(RtpParseFault::Truncated, "RTP packet truncated inside the CSRC list");
  }
  if (!has_ext) {
    if (require_label) throw RtpParseError(RtpParseFault::MissingExtension, "missing frame label extension");
    h.payload_offset = offset;
    return raw;
  }
  if (bytes.size() < offset + 4) {
    throw RtpParseError(RtpParseFault::TruncatedExtension, "RTP header extension truncated");
  }
  const std::uint16_t profile = get16(bytes, offset);
  const std::size_t words = get16(bytes, offset + 2);
  if (bytes.size() < offset + 4 + 4 * words) {
    throw RtpParseError(RtpParseFault::TruncatedExtension,
                        fmt::format("RTP header extension declares {} words but packet ends early", words));
  }
  if (profile != kFrameLabelProfile) {
    throw RtpParseError(RtpParseFault::UnknownProfile,
                        fmt::format("unknown header extension profile 0x{:04X}", profile));
  }
  if (words != 1) {
    throw RtpParseError(RtpParseFault::BadExtensionLength,
                        fmt::format("frame label extension must be 1 word, got {}", words));
  }
  const std::uint32_t word = get32(bytes, offset + 4);
  const std::uint32_t type = word >> 30;
  if (type > 2) throw RtpParseError(RtpParseFault::BadFrameType, fmt::format("invalid frame type code {}", type));
  raw.has_label = true;
  raw.label.frame_type = static_cast<FrameType>(type);
  raw.label.begin = ((word >> 29) & 1u) != 0;
  raw.label.end = ((word >> 28) & 1u) != 0;
  raw.label.dist_to_gop_end = static_cast<std::uint16_t>((word >> 16) & 0xFFFu);
  h.frame_type = raw.label.frame_type;
  h.begin = raw.label.begin;
  h.end = raw.label.end;
  h.dist_to_gop_end = raw.label.dist_to_gop_end;
  h.payload_offset = offset + 4 + 4 * words;
  return raw;
}

}  // namespace

std::vector<std::uint8_t> serialize(const RtpPacket& pkt) {
  std::vector<std::uint8_t> out;
  out.reserve(kRtpFixedHeaderSize + kFrameLabelExtSize + pkt.payload.size());
  out.push_back(static_cast<std::uint8_t>(0x80 | (pkt.extension ? 0x10 : 0x00)));
  out.push_back(static_cast<std::uint8_t>((pkt.marker ? 0x80 : 0x00) | (pkt.payload_type & 0x7F)));
  put16(out, pkt.seq);
  put32(out, pkt.timestamp);
  put32(out, pkt.ssrc);
  if (pkt.extension) {
    put16(out, kFrameLabelProfile);
    put16(out, 1);
    put32(out, encode_label(*pkt.extension));
  }
  out.insert(out.end(), pkt.payload.begin(), pkt.payload.end());
  return out;
}

ParsedHeader parse_header(std::span<const std::uint8_t> bytes) {
  return parse_raw(bytes, true).fields;
}

RtpPacket parse_packet(std::span<const std::uint8_t> bytes) {
  const auto raw = parse_raw(bytes, false);
  RtpPacket pkt;
  pkt.seq = raw.fields.seq;
  pkt.timestamp = raw.fields.timestamp;
  pkt.ssrc = raw.fields.ssrc;
  pkt.marker = raw.fields.marker;
  pkt.payload_type = raw.fields.payload_type;
  if (raw.has_label) pkt.extension = raw.label;
  pkt.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(raw.fields.payload_offset), bytes.end());
  return pkt;
}

std::uint32_t frame_timestamp(std::size_t frame_index, double framerate) {
  const double ticks = std::round(static_cast<double>(frame_index) * kRtpClockRate / framerate);
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(ticks) & 0xFFFFFFFFu);
}

std::vector<RtpPacket> packetize_frame(const FrameMeta& frame, std::uint32_t ssrc,
                                       std::uint16_t start_seq, std::uint32_t timestamp,
                                       std::size_t payload_bytes, std::uint8_t payload_type) {
  if (frame.size_packets < 1) throw Error(ErrorKind::Input, "frame must span at least one packet");
  if (frame.dist_to_gop_end > kMaxDistToGopEnd) {
    throw Error(ErrorKind::EncodingRange,
                fmt::format("dist_to_gop_end {} does not fit the 12-bit label field", frame.dist_to_gop_end));
  }
  std::vector<RtpPacket> out(frame.size_packets);
  for (std::uint32_t k = 0; k < frame.size_packets; ++k) {
    auto& p = out[k];
    p.seq = static_cast<std::uint16_t>(start_seq + k);
    p.timestamp = timestamp;
    p.ssrc = ssrc;
    p.payload_type = payload_type;
    FrameLabelExt ext;
    ext.frame_type = frame.type;
    ext.begin = k == 0;
    ext.end = k + 1 == frame.size_packets;
    ext.dist_to_gop_end = static_cast<std::uint16_t>(frame.dist_to_gop_end);
    p.marker = ext.end;
    p.extension = ext;
    p.payload.resize(payload_bytes);
    for (std::size_t i = 0; i < payload_bytes; ++i) p.payload[i] = filler_byte(p.seq, i);
  }
  return out;
}

std::vector<RtpPacket> packetize_trace(const FrameTrace& trace, std::uint32_t ssrc,
                                       std::uint16_t start_seq, std::size_t payload_bytes) {
  std::vector<RtpPacket> out;
  out.reserve(trace.total_packets());
  std::uint16_t seq = start_seq;
  for (const auto& f : trace.frames) {
    auto pkts = packetize_frame(f, ssrc, seq, frame_timestamp(f.index, trace.framerate), payload_bytes);
    seq = static_cast<std::uint16_t>(seq + f.size_packets);
    for (auto& p : pkts) out.push_back(std::move(p));
  }
  return out;
}

std::vector<FrameMeta> frames_from_headers(std::span<const ParsedHeader> headers) {
  std::vector<FrameMeta> frames;
  bool open = false;
  FrameMeta cur;
  for (std::size_t k = 0; k < headers.size(); ++k) {
    const auto& h = headers[k];
    if (h.begin) {
      if (open) throw Error(ErrorKind::Input, fmt::format("packet {}: begin flag inside an open frame", k));
      open = true;
      cur = FrameMeta{frames.size(), h.frame_type, 0, h.dist_to_gop_end};
    } else if (!open) {
      throw Error(ErrorKind::Input, fmt::format("packet {}: continuation packet without a frame start", k));
    } else if (h.frame_type != cur.type || h.dist_to_gop_end != cur.dist_to_gop_end) {
      throw Error(ErrorKind::Input, fmt::format("packet {}: label differs from the rest of its frame", k));
    }
    ++cur.size_packets;
    if (h.end) {
      frames.push_back(cur);
      open = false;
    }
  }
  if (open) throw Error(ErrorKind::Input, "trailing frame has no end flag");
  return frames;
}

}  // namespace ulp
