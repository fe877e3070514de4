#include "pec/bitio.hpp"

#include <string>

namespace pec {

void BitWriter::put_bit(bool bit) {
  if ((bits_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ & 7));
  ++bits_;
}

void BitWriter::put_bits(std::uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) put_bit((value >> i) & 1);
}

std::string BitWriter::to_string() const {
  std::string out;
  out.reserve(bits_);
  for (std::size_t i = 0; i < bits_; ++i)
    out.push_back((bytes_[i >> 3] >> (7 - (i & 7))) & 1 ? '1' : '0');
  return out;
}

BitReader::BitReader(std::span<const std::uint8_t> bytes)
    : BitReader(bytes, bytes.size() * 8) {}

BitReader::BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_limit)
    : bytes_(bytes), limit_(bit_limit) {
  if (bit_limit > bytes.size() * 8)
    throw ContractViolation("bit limit exceeds buffer");
}

bool BitReader::get_bit() {
  if (pos_ >= limit_) throw TruncatedError("bit source exhausted");
  bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
  ++pos_;
  return bit;
}

std::uint64_t BitReader::get_bits(int count) {
  std::uint64_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
  return v;
}

std::vector<std::uint8_t> bits_from_string(std::string_view bits) {
  BitWriter w;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ContractViolation("bit string must be 0/1");
    w.put_bit(c == '1');
  }
  return std::move(w).take();
}

std::size_t pack_bounded(std::uint64_t n, std::uint64_t u, BitWriter& sink) {
  if (u == 0 || n >= u)
    throw ContractViolation("pack_bounded: need 0 <= n < u");
  std::uint64_t a = 0, b = u, m = u / 2;
  std::size_t written = 0;
  while (a != m) {
    if (n < m) {
      sink.put_bit(true);
      b = m;
    } else {
      sink.put_bit(false);
      a = m;
    }
    m = a + (b - a) / 2;
    ++written;
  }
  return written;
}

std::uint64_t unpack_bounded(std::uint64_t u, BitReader& source) {
  if (u == 0) throw ContractViolation("unpack_bounded: u must be >= 1");
  std::uint64_t a = 0, b = u, m = u / 2;
  while (a != m) {
    if (source.get_bit())
      b = m;
    else
      a = m;
    m = a + (b - a) / 2;
  }
  return m;
}

std::size_t elias_gamma_encode(std::uint64_t b, BitWriter& sink) {
  if (b == 0) throw ContractViolation("elias_gamma_encode: b must be >= 1");
  int lg = 63;
  while (((b >> lg) & 1) == 0) --lg;
  sink.put_bits(0, lg);
  sink.put_bits(b, lg + 1);
  return static_cast<std::size_t>(2 * lg + 1);
}

std::uint64_t elias_gamma_decode(BitReader& source) {
  int zeros = 0;
  while (!source.get_bit()) {
    if (++zeros > 63) throw CorruptDataError("elias gamma: zero run too long");
  }
  std::uint64_t v = 1;
  for (int i = 0; i < zeros; ++i) v = (v << 1) | (source.get_bit() ? 1u : 0u);
  return v;
}

}  // namespace pec
