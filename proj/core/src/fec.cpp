#include "ulp/fec.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>

namespace ulp {

void validate(const FecMatrixConfig& cfg) {
  if (cfg.rows_d < 1) throw Error(ErrorKind::ParameterDomain, "FEC rows D must be >= 1");
  if (cfg.cols_l < 1) throw Error(ErrorKind::ParameterDomain, "FEC columns L must be >= 1");
}

std::size_t n_matrices(std::size_t z, const FecMatrixConfig& cfg) {
  validate(cfg);
  return (z + cfg.capacity() - 1) / cfg.capacity();
}

std::size_t fec_packet_count(std::size_t z, const FecMatrixConfig& cfg) {
  validate(cfg);
  return (z + cfg.rows_d - 1) / cfg.rows_d;
}

std::vector<FecMatrixSpan> matrix_spans(std::size_t z, const FecMatrixConfig& cfg) {
  validate(cfg);
  std::vector<FecMatrixSpan> out;
  const std::size_t cap = cfg.capacity();
  for (std::size_t first = 0; first < z; first += cap) {
    const std::size_t size = std::min(cap, z - first);
    const std::size_t cols = size == cap ? cfg.cols_l : (size + cfg.rows_d - 1) / cfg.rows_d;
    out.push_back({first, size, cols});
  }
  return out;
}

std::vector<FecColumn> column_layout(std::size_t z, const FecMatrixConfig& cfg) {
  std::vector<FecColumn> out;
  const auto spans = matrix_spans(z, cfg);
  out.reserve(fec_packet_count(z, cfg));
  for (std::size_t m = 0; m < spans.size(); ++m) {
    const auto& s = spans[m];
    for (std::size_t c = 0; c < s.cols; ++c) {
      // Row-major fill: column c holds c, c + cols, c + 2*cols, ...
      const std::size_t count = (s.size - c + s.cols - 1) / s.cols;
      out.push_back({s.first + c, s.cols, count, m});
    }
  }
  return out;
}

namespace {

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

void xor_into(std::vector<std::uint8_t>& acc, std::span<const std::uint8_t> src) {
  if (acc.size() < src.size()) acc.resize(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) acc[i] ^= src[i];
}

}  // namespace

std::vector<std::uint8_t> serialize_fec(const FecPacket& fec) {
  std::vector<std::uint8_t> out;
  out.reserve(kFecHeaderSize + fec.payload.size());
  put16(out, fec.sn_base);
  put16(out, fec.offset);
  put16(out, fec.na);
  put16(out, fec.length_recovery);
  out.insert(out.end(), 4, 0);
  out.insert(out.end(), fec.payload.begin(), fec.payload.end());
  return out;
}

FecPacket parse_fec(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFecHeaderSize) {
    throw Error(ErrorKind::Parse, fmt::format("FEC header truncated: {} bytes, need 12", bytes.size()));
  }
  FecPacket fec;
  fec.sn_base = get16(bytes, 0);
  fec.offset = get16(bytes, 2);
  fec.na = get16(bytes, 4);
  fec.length_recovery = get16(bytes, 6);
  fec.payload.assign(bytes.begin() + kFecHeaderSize, bytes.end());
  return fec;
}

RtpPacket fec_to_rtp(const FecPacket& fec, std::uint16_t seq, std::uint32_t timestamp,
                     std::uint32_t ssrc) {
  RtpPacket pkt;
  pkt.seq = seq;
  pkt.timestamp = timestamp;
  pkt.ssrc = ssrc;
  pkt.payload_type = kFecPayloadType;
  pkt.payload = serialize_fec(fec);
  return pkt;
}

FecPacket fec_from_rtp(const RtpPacket& pkt) {
  if (pkt.payload_type != kFecPayloadType) {
    throw Error(ErrorKind::Parse, fmt::format("payload type {} is not the FEC payload type", pkt.payload_type));
  }
  return parse_fec(pkt.payload);
}

std::vector<FecPacket> encode(std::span<const RtpPacket> data, const FecMatrixConfig& cfg) {
  validate(cfg);
  if (data.empty()) throw Error(ErrorKind::Input, "cannot FEC-encode an empty packet sequence");
  for (std::size_t i = 1; i < data.size(); ++i) {
    if (data[i].seq != static_cast<std::uint16_t>(data[0].seq + i)) {
      throw Error(ErrorKind::Input,
                  fmt::format("non-contiguous sequence numbers: position {} has seq {}, expected {}", i,
                              data[i].seq, static_cast<std::uint16_t>(data[0].seq + i)));
    }
  }
  std::vector<FecPacket> out;
  for (const auto& col : column_layout(data.size(), cfg)) {
    FecPacket fec;
    fec.sn_base = data[col.first].seq;
    fec.offset = static_cast<std::uint16_t>(col.stride);
    fec.na = static_cast<std::uint16_t>(col.count);
    for (std::size_t j = 0; j < col.count; ++j) {
      const auto& p = data[col.first + j * col.stride];
      xor_into(fec.payload, p.payload);
      fec.length_recovery ^= static_cast<std::uint16_t>(p.payload.size());
    }
    out.push_back(std::move(fec));
  }
  return out;
}

std::vector<RecoveredPacket> recover(std::span<const RtpPacket> received_data,
                                     std::span<const FecPacket> received_fec) {
  std::unordered_map<std::uint16_t, const RtpPacket*> by_seq;
  by_seq.reserve(received_data.size());
  for (const auto& p : received_data) by_seq.emplace(p.seq, &p);

  std::vector<RecoveredPacket> out;
  for (const auto& fec : received_fec) {
    std::size_t missing = 0;
    std::uint16_t missing_seq = 0;
    for (std::size_t j = 0; j < fec.na; ++j) {
      if (!by_seq.contains(fec.member(j))) {
        ++missing;
        missing_seq = fec.member(j);
      }
    }
    if (missing != 1) continue;

    RecoveredPacket rec;
    rec.seq = missing_seq;
    rec.payload = fec.payload;
    std::uint16_t length = fec.length_recovery;
    for (std::size_t j = 0; j < fec.na; ++j) {
      if (fec.member(j) == missing_seq) continue;
      const auto& payload = by_seq.at(fec.member(j))->payload;
      xor_into(rec.payload, payload);
      length ^= static_cast<std::uint16_t>(payload.size());
    }
    rec.payload.resize(length);
    out.push_back(std::move(rec));
  }
  return out;
}

std::set<std::uint16_t> recovered_seqs(const std::vector<RecoveredPacket>& recovered) {
  std::set<std::uint16_t> out;
  for (const auto& r : recovered) out.insert(r.seq);
  return out;
}

std::vector<bool> recover_mask(std::span<const FecColumn> layout, const std::vector<bool>& data_lost,
                               const std::vector<bool>& fec_lost) {
  std::vector<bool> recovered(data_lost.size(), false);
  for (std::size_t c = 0; c < layout.size(); ++c) {
    if (c < fec_lost.size() && fec_lost[c]) continue;
    const auto& col = layout[c];
    std::size_t missing = 0;
    std::size_t which = 0;
    for (std::size_t j = 0; j < col.count; ++j) {
      const std::size_t idx = col.first + j * col.stride;
      if (data_lost[idx]) {
        ++missing;
        which = idx;
      }
    }
    if (missing == 1) recovered[which] = true;
  }
  return recovered;
}

}  // namespace ulp
