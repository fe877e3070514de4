#pragma once

// Serialized container: fixed header, symbol model parameters, coded
// entry-point index, and the data region of concatenated segments.
//
// Layout (all multi-byte integers little-endian):
//
//   offset  size  field
//   0       4     magic "PEC1"
//   4       1     version (1)
//   5       1     flags: bits 0-1 packing mode, bits 2-3 index codec
//   6       1     model id (0 = bernoulli, 1 = order-0)
//   7       1     reserved, must be 0
//   8       4     stream count N_s
//   12      8     total symbol count
//   20      4     data-region size D
//   24      M     model parameters (bernoulli: p0 u16; order-0: 256 x u16)
//   24+M    2     index length L in bytes
//   26+M    L     index, zero-padded to a byte boundary
//   26+M+L  D     data region

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pec/arith.hpp"
#include "pec/common.hpp"

namespace pec {

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kHeaderFixedBytes = 26;

using SymbolModel = std::variant<BinaryModel, CdfModel>;

std::size_t model_param_bytes(const SymbolModel& model);

class FormatError : public std::runtime_error {
 public:
  enum class Reason { kBadMagic, kUnsupportedVersion, kIndexMismatch, kBadField };
  FormatError(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

struct Header {
  PackingMode mode = PackingMode::kUni;
  IndexCodec codec = IndexCodec::kRtc;
  SymbolModel model = BinaryModel{};
  std::uint32_t streams = 1;
  std::uint64_t symbols = 0;
  std::uint32_t data_size = 0;
};

// Number of index entries (segments) for a stream count.
std::size_t segment_count(PackingMode mode, std::uint32_t streams);

// Partition of [0, D) into segments, numbered from 1.
class SegmentMap {
 public:
  SegmentMap() = default;
  explicit SegmentMap(std::span<const std::uint32_t> sizes);

  std::size_t count() const { return bounds_.size() - 1; }
  std::uint64_t begin(std::size_t j) const { return bounds_.at(j - 1); }
  std::uint64_t end(std::size_t j) const { return bounds_.at(j); }
  std::uint64_t size(std::size_t j) const { return end(j) - begin(j); }
  std::uint64_t total() const { return bounds_.back(); }
  const std::vector<std::uint64_t>& bounds() const { return bounds_; }

 private:
  std::vector<std::uint64_t> bounds_{0};
};

struct ParsedContainer {
  Header header;
  std::vector<std::uint32_t> sizes;
  SegmentMap segments;
  // View into the parsed buffer.
  std::span<const std::uint8_t> data;
  std::size_t index_bytes = 0;
  std::size_t index_bits = 0;
  // Fixed header plus model parameters (everything before the index length).
  std::size_t header_bytes = 0;
};

// `segments[j]` is the stored content of segment j+1. Throws FormatError
// (kIndexMismatch) when header.data_size differs from the segment total.
std::vector<std::uint8_t> write_container(const Header& header,
                                          std::span<const std::vector<std::uint8_t>> segments);

// Throws FormatError, TruncatedError or CorruptDataError.
ParsedContainer read_container(std::span<const std::uint8_t> bytes);

// Source for the stream of segment j (1-based) read in `direction`; reads
// outside the segment yield zeros. Backward sources in FR mode mirror bits.
ByteSource segment_source(const ParsedContainer& container, std::size_t j,
                          Direction direction);

}  // namespace pec
