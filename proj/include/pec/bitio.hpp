#pragma once

// Bit-level I/O (MSB-first within each byte), bounded-integer bisection
// codes, Elias-gamma codes, and 8-bit reversal.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pec/common.hpp"

namespace pec {

class BitWriter {
 public:
  void put_bit(bool bit);
  // Writes the low `count` bits of `value`, most significant first.
  void put_bits(std::uint64_t value, int count);

  std::size_t bit_position() const { return bits_; }
  // Bytes written so far; the last byte is zero-padded.
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() && { return std::move(bytes_); }

  // "0100..." rendering of the written bits, for diagnostics and tests.
  std::string to_string() const;

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes);
  BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_limit);

  // Throws TruncatedError past the end.
  bool get_bit();
  std::uint64_t get_bits(int count);

  std::size_t bit_position() const { return pos_; }
  std::size_t bits_remaining() const { return limit_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t limit_;
  std::size_t pos_ = 0;
};

// Builds a reader over a "0101" string. Test helper.
std::vector<std::uint8_t> bits_from_string(std::string_view bits);

// Codes n in [0, u) by bisection. Emits floor(log2 u) or ceil(log2 u) bits.
std::size_t pack_bounded(std::uint64_t n, std::uint64_t u, BitWriter& sink);
std::uint64_t unpack_bounded(std::uint64_t u, BitReader& source);

// Elias-gamma (exp-Golomb order 0) for b >= 1: 2*floor(log2 b) + 1 bits.
std::size_t elias_gamma_encode(std::uint64_t b, BitWriter& sink);
std::uint64_t elias_gamma_decode(BitReader& source);
constexpr std::size_t elias_gamma_length(std::uint64_t b) {
  std::size_t lg = 0;
  while (b >>= 1) ++lg;
  return 2 * lg + 1;
}

constexpr std::uint8_t reverse_byte(std::uint8_t n) {
  n = static_cast<std::uint8_t>((n & 0xF0) >> 4 | (n & 0x0F) << 4);
  n = static_cast<std::uint8_t>((n & 0xCC) >> 2 | (n & 0x33) << 2);
  n = static_cast<std::uint8_t>((n & 0xAA) >> 1 | (n & 0x55) << 1);
  return n;
}

}  // namespace pec
