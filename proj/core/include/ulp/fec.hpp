#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "ulp/rtp.hpp"

namespace ulp {

/// Geometry of the 1-D interleaved parity code: D rows by L columns.
struct FecMatrixConfig {
  std::uint32_t rows_d = 4;
  std::uint32_t cols_l = 20;

  std::size_t capacity() const noexcept { return std::size_t{rows_d} * cols_l; }
  bool operator==(const FecMatrixConfig&) const = default;
};

/// Throws Error{ParameterDomain} unless D >= 1 and L >= 1.
void validate(const FecMatrixConfig& cfg);

/// Matrices needed for z packets: ceil(z / (D*L)).
std::size_t n_matrices(std::size_t z, const FecMatrixConfig& cfg);

/// Parity packets generated for z packets: ceil(z / D).
std::size_t fec_packet_count(std::size_t z, const FecMatrixConfig& cfg);

/// One matrix of a protected block. Full matrices have L columns; the final
/// partial matrix of r packets keeps D rows and shrinks to ceil(r/D) columns
/// so each parity packet still covers up to D data packets.
struct FecMatrixSpan {
  std::size_t first = 0;  // offset of the matrix's first packet in the block
  std::size_t size = 0;   // data packets in the matrix
  std::size_t cols = 0;   // parity packets (= columns) in the matrix
};

/// One parity column: data packets first + j*stride for j < count.
struct FecColumn {
  std::size_t first = 0;
  std::size_t stride = 0;
  std::size_t count = 0;
  std::size_t matrix = 0;
};

std::vector<FecMatrixSpan> matrix_spans(std::size_t z, const FecMatrixConfig& cfg);

/// All columns of a z-packet block, matrix by matrix, in column order. This
/// is also the transmission order of the parity packets.
std::vector<FecColumn> column_layout(std::size_t z, const FecMatrixConfig& cfg);

inline constexpr std::size_t kFecHeaderSize = 12;
inline constexpr std::uint8_t kFecPayloadType = 127;

/// Parity packet. Header layout (network order, 12 bytes):
///   sn_base:16 | offset:16 | na:16 | length_recovery:16 | reserved:32
struct FecPacket {
  std::uint16_t sn_base = 0;
  std::uint16_t offset = 0;
  std::uint16_t na = 0;
  std::uint16_t length_recovery = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const FecPacket&) const = default;

  /// Sequence number of the j-th protected packet.
  std::uint16_t member(std::size_t j) const noexcept {
    return static_cast<std::uint16_t>(sn_base + j * offset);
  }
};

std::vector<std::uint8_t> serialize_fec(const FecPacket& fec);
FecPacket parse_fec(std::span<const std::uint8_t> bytes);

/// Wraps a parity packet as the payload of an RTP packet (no frame label).
RtpPacket fec_to_rtp(const FecPacket& fec, std::uint16_t seq, std::uint32_t timestamp,
                     std::uint32_t ssrc);
FecPacket fec_from_rtp(const RtpPacket& pkt);

/// Column-wise XOR parity over packets with contiguous sequence numbers.
/// Throws Error{Input} for empty or non-contiguous input.
std::vector<FecPacket> encode(std::span<const RtpPacket> data, const FecMatrixConfig& cfg);

struct RecoveredPacket {
  std::uint16_t seq = 0;
  std::vector<std::uint8_t> payload;
};

/// A missing packet is rebuilt iff its column's parity packet arrived and it
/// is the only member of that column that did not. Never returns a packet
/// that is present in received_data.
std::vector<RecoveredPacket> recover(std::span<const RtpPacket> received_data,
                                     std::span<const FecPacket> received_fec);

std::set<std::uint16_t> recovered_seqs(const std::vector<RecoveredPacket>& recovered);

/// Payload-free recovery over a column layout, for the simulator. Element i
/// of the result is true when data packet i was lost and is rebuilt.
std::vector<bool> recover_mask(std::span<const FecColumn> layout, const std::vector<bool>& data_lost,
                               const std::vector<bool>& fec_lost);

}  // namespace ulp
