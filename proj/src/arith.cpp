#include "pec/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pec {

BinaryModel::BinaryModel(std::uint32_t p0_16) {
  if (p0_16 < 1 || p0_16 >= kProbScale)
    throw ContractViolation("binary model p0 must be in [1, 65535]");
  p0 = static_cast<std::uint16_t>(p0_16);
}

BinaryModel BinaryModel::from_probability(double p_zero) {
  double scaled = std::round(p_zero * kProbScale);
  scaled = std::clamp(scaled, 1.0, static_cast<double>(kProbScale - 1));
  return BinaryModel(static_cast<std::uint32_t>(scaled));
}

CdfModel::CdfModel() {
  for (std::size_t s = 0; s <= kSymbols; ++s)
    cdf_[s] = static_cast<std::uint32_t>(s * (kProbScale / kSymbols));
}

CdfModel CdfModel::from_frequencies(std::span<const std::uint32_t> freqs) {
  if (freqs.size() != kSymbols)
    throw ContractViolation("cdf model needs 256 frequencies");
  CdfModel m;
  std::uint64_t acc = 0;
  m.cdf_[0] = 0;
  for (std::size_t s = 0; s < kSymbols; ++s) {
    if (freqs[s] >= kProbScale)
      throw ContractViolation("cdf model: a single symbol cannot own the whole range");
    acc += freqs[s];
    if (acc > kProbScale) break;
    m.cdf_[s + 1] = static_cast<std::uint32_t>(acc);
  }
  if (acc != kProbScale)
    throw ContractViolation("cdf model frequencies must sum to 65536");
  return m;
}

CdfModel CdfModel::from_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() != kSymbols)
    throw ContractViolation("cdf model needs 256 counts");
  unsigned __int128 total = 0;
  std::size_t nonzero = 0;
  std::size_t last = 0;
  for (std::size_t s = 0; s < kSymbols; ++s) {
    total += counts[s];
    if (counts[s] != 0) {
      ++nonzero;
      last = s;
    }
  }
  if (nonzero == 0) return CdfModel();

  std::array<std::uint32_t, kSymbols> freq{};
  if (nonzero == 1) {
    // The lone symbol cannot take the full range; lend one unit to a neighbor.
    freq[last] = kProbScale - 1;
    freq[(last + 1) % kSymbols] = 1;
    return from_frequencies(freq);
  }

  std::int64_t sum = 0;
  for (std::size_t s = 0; s < kSymbols; ++s) {
    if (counts[s] == 0) continue;
    auto scaled = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(counts[s]) * kProbScale) / total);
    freq[s] = static_cast<std::uint32_t>(std::max<std::uint64_t>(1, scaled));
    sum += freq[s];
  }

  std::array<std::size_t, kSymbols> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return freq[a] > freq[b]; });
  std::int64_t diff = static_cast<std::int64_t>(kProbScale) - sum;
  if (diff > 0) {
    freq[order[0]] += static_cast<std::uint32_t>(diff);
  } else {
    for (std::size_t s : order) {
      if (diff == 0) break;
      std::int64_t take = std::min<std::int64_t>(-diff, freq[s] - 1);
      freq[s] -= static_cast<std::uint32_t>(take);
      diff += take;
    }
  }
  return from_frequencies(freq);
}

std::uint8_t CdfModel::lookup(std::uint32_t target) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  return static_cast<std::uint8_t>(std::distance(cdf_.begin(), it) - 1);
}

std::array<std::uint16_t, CdfModel::kSymbols> CdfModel::frequencies() const {
  std::array<std::uint16_t, kSymbols> f{};
  for (std::size_t s = 0; s < kSymbols; ++s)
    f[s] = static_cast<std::uint16_t>(cdf_[s + 1] - cdf_[s]);
  return f;
}

double CdfModel::cost_bits(std::uint8_t s) const {
  return kProbBits - std::log2(static_cast<double>(width(s)));
}

ByteChain ByteChain::with_prefix(std::span<const std::uint8_t> bytes) {
  ByteChain c;
  for (std::uint8_t b : bytes) {
    if (c.has_cache_) c.out_.push_back(c.cache_);
    c.cache_ = b;
    c.has_cache_ = true;
  }
  return c;
}

void ByteChain::push(std::uint8_t byte) {
  if (byte == 0xFF) {
    ++pending_ff_;
    return;
  }
  if (has_cache_) out_.push_back(cache_);
  out_.insert(out_.end(), pending_ff_, 0xFF);
  pending_ff_ = 0;
  cache_ = byte;
  has_cache_ = true;
}

void ByteChain::add_carry() {
  // The interval never leaves [0, 1) of the whole stream, so a carry always
  // lands on a held byte that can absorb it.
  if (!has_cache_) throw std::logic_error("carry past start of stream");
  if (pending_ff_ == 0) {
    if (cache_ == 0xFF) throw std::logic_error("carry overflow in cache byte");
    ++cache_;
    return;
  }
  if (cache_ == 0xFF) throw std::logic_error("carry overflow in cache byte");
  out_.push_back(static_cast<std::uint8_t>(cache_ + 1));
  out_.insert(out_.end(), pending_ff_ - 1, 0x00);
  cache_ = 0x00;
  pending_ff_ = 0;
}

std::size_t ByteChain::size() const {
  return out_.size() + (has_cache_ ? 1 : 0) + pending_ff_;
}

std::vector<std::uint8_t> ByteChain::materialize() const {
  std::vector<std::uint8_t> bytes = out_;
  if (has_cache_) bytes.push_back(cache_);
  bytes.insert(bytes.end(), pending_ff_, 0xFF);
  return bytes;
}

double pending_info(const FinalCoderState& fs) {
  return 32.0 - std::log2(static_cast<double>(fs.range));
}

void RangeEncoder::add_to_low(std::uint64_t amount) {
  std::uint64_t sum = low_ + amount;
  if (sum >> 32) chain_.add_carry();
  low_ = static_cast<std::uint32_t>(sum);
}

void RangeEncoder::renormalize() {
  while (range_ < kRangeMin) {
    chain_.push(static_cast<std::uint8_t>(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::encode_bit(bool bit, BinaryModel model) {
  // range >= 2^24 and p0 in [1, 2^16) keep both sub-ranges >= 256.
  const std::uint32_t split = (range_ >> kProbBits) * model.p0;
  if (!bit) {
    range_ = split;
  } else {
    add_to_low(split);
    range_ -= split;
  }
  renormalize();
}

void RangeEncoder::encode_symbol(std::uint8_t s, const CdfModel& model) {
  const std::uint32_t w = model.width(s);
  if (w == 0) throw ContractViolation("encode_symbol: symbol has zero width");
  const std::uint32_t unit = range_ >> kProbBits;
  add_to_low(static_cast<std::uint64_t>(unit) * model.low(s));
  range_ = unit * w;
  renormalize();
}

std::vector<std::uint8_t> RangeEncoder::value_digits() const {
  std::vector<std::uint8_t> digits = chain_.materialize();
  for (int shift = 24; shift >= 0; shift -= 8)
    digits.push_back(static_cast<std::uint8_t>(low_ >> shift));
  return digits;
}

FinalCoderState RangeEncoder::finalize() const {
  return FinalCoderState{low_, range_, chain_, direction_, bit_reversed_};
}

ByteSource::ByteSource(std::span<const std::uint8_t> data, std::size_t begin,
                       std::size_t end, Direction direction, bool bit_reversed)
    : data_(data),
      begin_(begin),
      end_(end),
      direction_(direction),
      bit_reversed_(bit_reversed) {
  if (begin > end || end > data.size())
    throw ContractViolation("byte source bounds outside buffer");
  cursor_ = direction == Direction::kForward ? static_cast<std::int64_t>(begin)
                                             : static_cast<std::int64_t>(end) - 1;
}

std::uint8_t ByteSource::next() {
  std::uint8_t byte = 0;
  if (cursor_ >= static_cast<std::int64_t>(begin_) &&
      cursor_ < static_cast<std::int64_t>(end_)) {
    byte = data_[static_cast<std::size_t>(cursor_)];
    if (bit_reversed_) byte = reverse_byte(byte);
  }
  cursor_ += direction_ == Direction::kForward ? 1 : -1;
  return byte;
}

RangeDecoder::RangeDecoder(ByteSource source) : source_(source) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | source_.next();
}

void RangeDecoder::renormalize() {
  while (range_ < kRangeMin) {
    code_ = (code_ << 8) | source_.next();
    range_ <<= 8;
  }
}

bool RangeDecoder::decode_bit(BinaryModel model) {
  const std::uint32_t split = (range_ >> kProbBits) * model.p0;
  bool bit;
  if (code_ < split) {
    range_ = split;
    bit = false;
  } else {
    code_ -= split;
    range_ -= split;
    bit = true;
  }
  renormalize();
  return bit;
}

std::uint8_t RangeDecoder::decode_symbol(const CdfModel& model) {
  const std::uint32_t unit = range_ >> kProbBits;
  std::uint32_t target = code_ / unit;
  if (target >= kProbScale) target = kProbScale - 1;
  const std::uint8_t s = model.lookup(target);
  code_ -= unit * model.low(s);
  range_ = unit * model.width(s);
  renormalize();
  return s;
}

}  // namespace pec
