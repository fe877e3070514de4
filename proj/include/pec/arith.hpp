#pragma once

// Byte-oriented 32-bit range coder.
//
// The encoder state is a low value L and a range R (the current interval is
// [L, L+R) / 2^32 relative to the byte window that follows the emitted
// bytes). R is renormalized into [2^24, 2^32) after every symbol by shifting
// out the top byte of L. Carries are never written into already flushed
// bytes: the most recent byte is held back as a "cache", followed by a run
// of pending 0xFF bytes, and a carry increments the cache and turns the
// pending run into zeros.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pec/bitio.hpp"
#include "pec/common.hpp"

namespace pec {

inline constexpr std::uint32_t kRangeMin = 1u << 24;
inline constexpr std::uint32_t kRangeInit = 0xFFFFFFFFu;
inline constexpr int kProbBits = 16;
inline constexpr std::uint32_t kProbScale = 1u << kProbBits;

// Probability of symbol 0, in units of 2^-16. Valid range [1, 65535].
struct BinaryModel {
  std::uint16_t p0 = 1u << 15;

  BinaryModel() = default;
  explicit BinaryModel(std::uint32_t p0_16);
  // Rounds and clamps a real probability of zero into the valid range.
  static BinaryModel from_probability(double p_zero);
};

// Static 256-symbol model: cumulative frequencies over 2^16.
class CdfModel {
 public:
  static constexpr std::size_t kSymbols = 256;

  // Uniform over all 256 symbols.
  CdfModel();
  // Frequencies must sum to 2^16 and none may equal 2^16.
  static CdfModel from_frequencies(std::span<const std::uint32_t> freqs);
  // Scales raw counts to a valid table; every counted symbol keeps nonzero
  // width. All-zero counts give the uniform model.
  static CdfModel from_counts(std::span<const std::uint64_t> counts);

  std::uint32_t low(std::uint8_t s) const { return cdf_[s]; }
  std::uint32_t width(std::uint8_t s) const { return cdf_[s + 1] - cdf_[s]; }
  // Symbol whose cumulative interval contains `target` in [0, 2^16).
  std::uint8_t lookup(std::uint32_t target) const;
  std::array<std::uint16_t, kSymbols> frequencies() const;

  // -log2 probability of `s`, for ideal-codelength accounting.
  double cost_bits(std::uint8_t s) const;

  bool operator==(const CdfModel&) const = default;

 private:
  std::array<std::uint32_t, kSymbols + 1> cdf_{};
};

// Emission state with deferred carry: flushed bytes, then an optional held
// cache byte, then `pending_ff` bytes of 0xFF.
class ByteChain {
 public:
  ByteChain() = default;
  // Chain whose final byte is held as the cache (test and replay helper).
  static ByteChain with_prefix(std::span<const std::uint8_t> bytes);

  // Appends the next byte of the stream (already carry-free).
  void push(std::uint8_t byte);
  // Adds one at the last position of the chain.
  void add_carry();
  // Number of bytes logically produced, including cache and pending run.
  std::size_t size() const;
  // Flushed bytes followed by the held cache and pending run.
  std::vector<std::uint8_t> materialize() const;

 private:
  std::vector<std::uint8_t> out_;
  bool has_cache_ = false;
  std::uint8_t cache_ = 0;
  std::size_t pending_ff_ = 0;
};

// Encoder state captured before any termination bytes are written.
struct FinalCoderState {
  std::uint32_t low = 0;
  std::uint32_t range = kRangeInit;
  ByteChain chain;
  Direction direction = Direction::kForward;
  bool bit_reversed = false;

  // Interval endpoints as fractions of the byte window.
  double u() const { return low / 4294967296.0; }
  double v() const { return (static_cast<double>(low) + range) / 4294967296.0; }
};

// -log2(v - u) = 32 - log2(R). Always in (0, 8].
double pending_info(const FinalCoderState& fs);

class RangeEncoder {
 public:
  RangeEncoder() = default;
  explicit RangeEncoder(Direction direction, bool bit_reversed = false)
      : direction_(direction), bit_reversed_(bit_reversed) {}

  void encode_bit(bool bit, BinaryModel model);
  void encode_symbol(std::uint8_t s, const CdfModel& model);

  std::uint32_t low() const { return low_; }
  std::uint32_t range() const { return range_; }
  // Bytes emitted so far (held cache and pending run included).
  std::size_t payload_bytes() const { return chain_.size(); }
  // Emitted bytes followed by the 4 bytes of L: the big-endian digits of
  // the interval's lower end.
  std::vector<std::uint8_t> value_digits() const;

  FinalCoderState finalize() const;

 private:
  void add_to_low(std::uint64_t amount);
  void renormalize();

  std::uint32_t low_ = 0;
  std::uint32_t range_ = kRangeInit;
  ByteChain chain_;
  Direction direction_ = Direction::kForward;
  bool bit_reversed_ = false;
};

// Byte source over one stream's region of a buffer. Reads outside
// [begin, end) yield 0x00. Backward sources start at end-1 and decrement;
// bit-reversed sources pass every byte through reverse_byte.
class ByteSource {
 public:
  ByteSource(std::span<const std::uint8_t> data, std::size_t begin,
             std::size_t end, Direction direction, bool bit_reversed = false);
  // Whole buffer, forward.
  explicit ByteSource(std::span<const std::uint8_t> data)
      : ByteSource(data, 0, data.size(), Direction::kForward) {}

  std::uint8_t next();

 private:
  std::span<const std::uint8_t> data_;
  std::size_t begin_;
  std::size_t end_;
  // Signed cursor so backward reads can step below `begin_`.
  std::int64_t cursor_;
  Direction direction_;
  bool bit_reversed_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(ByteSource source);

  bool decode_bit(BinaryModel model);
  std::uint8_t decode_symbol(const CdfModel& model);

 private:
  void renormalize();

  ByteSource source_;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = kRangeInit;
};

}  // namespace pec
