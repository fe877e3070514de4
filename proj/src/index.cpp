#include "pec/index.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace pec {
namespace {

std::size_t padded_length(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

// Minimal binary code for v in [0, n): the smaller offsets get the shorter
// codewords.
std::size_t put_truncated(std::uint64_t v, std::uint64_t n, BitWriter& sink) {
  if (n <= 1) return 0;
  const int k = std::bit_width(n) - 1;
  const std::uint64_t short_codes = (std::uint64_t{2} << k) - n;
  if (v < short_codes) {
    sink.put_bits(v, k);
    return static_cast<std::size_t>(k);
  }
  sink.put_bits(v + short_codes, k + 1);
  return static_cast<std::size_t>(k + 1);
}

std::uint64_t get_truncated(std::uint64_t n, BitReader& source) {
  if (n <= 1) return 0;
  const int k = std::bit_width(n) - 1;
  const std::uint64_t short_codes = (std::uint64_t{2} << k) - n;
  std::uint64_t v = source.get_bits(k);
  if (v < short_codes) return v;
  v = (v << 1) | (source.get_bit() ? 1u : 0u);
  return v - short_codes;
}

// g[lo] and g[hi] known; g strictly increasing.
std::size_t bic_encode_range(const std::vector<std::uint64_t>& g, std::size_t lo,
                             std::size_t hi, BitWriter& sink) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::uint64_t first = g[lo] + (mid - lo);
  const std::uint64_t last = g[hi] - (hi - mid);
  std::size_t bits = put_truncated(g[mid] - first, last - first + 1, sink);
  bits += bic_encode_range(g, lo, mid, sink);
  bits += bic_encode_range(g, mid, hi, sink);
  return bits;
}

void bic_decode_range(std::vector<std::uint64_t>& g, std::size_t lo, std::size_t hi,
                      BitReader& source) {
  if (hi - lo < 2) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  if (g[hi] < g[lo] + (hi - lo)) throw CorruptDataError("bic: infeasible interval");
  const std::uint64_t first = g[lo] + (mid - lo);
  const std::uint64_t last = g[hi] - (hi - mid);
  g[mid] = first + get_truncated(last - first + 1, source);
  bic_decode_range(g, lo, mid, source);
  bic_decode_range(g, mid, hi, source);
}

}  // namespace

std::vector<std::uint64_t> entry_points(std::span<const std::uint32_t> sizes) {
  std::vector<std::uint64_t> h(sizes.size());
  std::uint64_t acc = 0;
  for (std::size_t n = 0; n < sizes.size(); ++n) h[n] = acc += sizes[n];
  return h;
}

double mean_size(std::span<const std::uint32_t> sizes) {
  if (sizes.empty()) throw ContractViolation("mean of empty size list");
  const double sum = std::accumulate(sizes.begin(), sizes.end(), 0.0);
  return sum / static_cast<double>(sizes.size());
}

std::uint32_t min_size(std::span<const std::uint32_t> sizes) {
  if (sizes.empty()) throw ContractViolation("minimum of empty size list");
  return *std::min_element(sizes.begin(), sizes.end());
}

RangeTree::RangeTree(std::span<const std::uint32_t> leaves)
    : leaves_(leaves.size()),
      values_(2 * leaves.size()),
      selection_(leaves.size()),
      minimum_(min_size(leaves)) {
  if (!std::has_single_bit(leaves_))
    throw ContractViolation("range tree needs a power-of-two leaf count");
  std::copy(leaves.begin(), leaves.end(), values_.begin() + static_cast<std::ptrdiff_t>(leaves_));
  for (std::size_t i = leaves_ - 1; i >= 1; --i) {
    const bool left = values_[2 * i] >= values_[2 * i + 1];
    selection_[i] = left ? 1 : 0;
    values_[i] = left ? values_[2 * i] : values_[2 * i + 1];
  }
}

bool RangeTree::properties_hold() const {
  for (std::size_t i = 1; i < leaves_; ++i) {
    const std::uint32_t x = selection_[i];
    const std::uint32_t a = values_[i];
    const std::uint32_t other = values_[2 * i + x];
    if (values_[2 * i + 1 - x] != a) return false;
    if (other < minimum_ || other + 1 > a + x) return false;
  }
  return true;
}

std::size_t rtc_encode(std::span<const std::uint32_t> sizes, std::uint32_t bound,
                       BitWriter& sink) {
  if (sizes.empty()) throw ContractViolation("rtc_encode: empty index");
  for (std::uint32_t b : sizes)
    if (b >= bound) throw ContractViolation("rtc_encode: value exceeds bound");
  const std::uint32_t lowest = min_size(sizes);
  std::vector<std::uint32_t> padded(sizes.begin(), sizes.end());
  padded.resize(padded_length(sizes.size()), lowest);

  const RangeTree tree(padded);
  const std::uint64_t top = tree.value(1);
  std::size_t bits = pack_bounded(top, bound, sink);
  // Bound top + 1 so that an all-equal array (minimum == top) is codable.
  bits += pack_bounded(lowest, top + 1, sink);
  for (std::size_t i = 1; i < tree.leaf_count(); ++i) {
    const std::uint64_t a = tree.value(i);
    if (a == lowest) continue;
    const std::uint32_t x = tree.selection(i) ? 1 : 0;
    sink.put_bit(x != 0);
    bits += 1 + pack_bounded(a - tree.value(2 * i + x) + x - 1, a - lowest + x, sink);
  }
  return bits;
}

std::vector<std::uint32_t> rtc_decode(std::size_t count, std::uint32_t bound,
                                      BitReader& source) {
  if (count == 0) throw ContractViolation("rtc_decode: empty index");
  const std::size_t n = padded_length(count);
  std::vector<std::uint64_t> a(2 * n);
  a[1] = unpack_bounded(bound, source);
  const std::uint64_t lowest = unpack_bounded(a[1] + 1, source);
  for (std::size_t i = 1; i < n; ++i) {
    a[2 * i] = a[2 * i + 1] = a[i];
    if (a[i] == lowest) continue;
    const std::uint64_t x = source.get_bit() ? 1 : 0;
    const std::uint64_t offset = unpack_bounded(a[i] - lowest + x, source);
    a[2 * i + x] = a[i] - offset + x - 1;
  }
  std::vector<std::uint32_t> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = static_cast<std::uint32_t>(a[n + k]);
  return out;
}

std::size_t bic_encode(std::span<const std::uint32_t> sizes, std::uint64_t total,
                       BitWriter& sink) {
  if (sizes.empty()) throw ContractViolation("bic_encode: empty index");
  const auto h = entry_points(sizes);
  if (h.back() != total) throw ContractViolation("bic_encode: sizes do not sum to total");
  // g_n = h_n + n is strictly increasing even with zero-size segments.
  std::vector<std::uint64_t> g(sizes.size() + 1);
  for (std::size_t n = 1; n <= sizes.size(); ++n) g[n] = h[n - 1] + n;
  return bic_encode_range(g, 0, sizes.size(), sink);
}

std::vector<std::uint32_t> bic_decode(std::size_t count, std::uint64_t total,
                                      BitReader& source) {
  if (count == 0) throw ContractViolation("bic_decode: empty index");
  std::vector<std::uint64_t> g(count + 1);
  g[count] = total + count;
  bic_decode_range(g, 0, count, source);
  std::vector<std::uint32_t> sizes(count);
  for (std::size_t n = 1; n <= count; ++n) {
    const std::uint64_t b = g[n] - g[n - 1] - 1;
    if (g[n] <= g[n - 1] || b > std::numeric_limits<std::uint32_t>::max())
      throw CorruptDataError("bic: decoded size out of range");
    sizes[n - 1] = static_cast<std::uint32_t>(b);
  }
  return sizes;
}

std::size_t gamma_index_encode(std::span<const std::uint32_t> sizes, BitWriter& sink) {
  std::size_t bits = 0;
  for (std::uint32_t b : sizes) bits += elias_gamma_encode(std::uint64_t{b} + 1, sink);
  return bits;
}

std::vector<std::uint32_t> gamma_index_decode(std::size_t count, BitReader& source) {
  std::vector<std::uint32_t> sizes(count);
  for (auto& b : sizes) {
    const std::uint64_t v = elias_gamma_decode(source);
    if (v - 1 > std::numeric_limits<std::uint32_t>::max())
      throw CorruptDataError("gamma index: size out of range");
    b = static_cast<std::uint32_t>(v - 1);
  }
  return sizes;
}

std::size_t i32_encode(std::span<const std::uint32_t> sizes, BitWriter& sink) {
  for (std::uint32_t b : sizes)
    for (int byte = 0; byte < 4; ++byte) sink.put_bits((b >> (8 * byte)) & 0xFF, 8);
  return 32 * sizes.size();
}

std::vector<std::uint32_t> i32_decode(std::size_t count, BitReader& source) {
  std::vector<std::uint32_t> sizes(count);
  for (auto& b : sizes) {
    b = 0;
    for (int byte = 0; byte < 4; ++byte)
      b |= static_cast<std::uint32_t>(source.get_bits(8)) << (8 * byte);
  }
  return sizes;
}

std::size_t encode_index(IndexCodec codec, std::span<const std::uint32_t> sizes,
                         std::uint64_t total, BitWriter& sink) {
  switch (codec) {
    case IndexCodec::kI32:
      return i32_encode(sizes, sink);
    case IndexCodec::kRtc:
      return rtc_encode(sizes, kRtcBound, sink);
    case IndexCodec::kBic:
      return bic_encode(sizes, total, sink);
    case IndexCodec::kGamma:
      return gamma_index_encode(sizes, sink);
  }
  throw ContractViolation("unknown index codec");
}

std::vector<std::uint32_t> decode_index(IndexCodec codec, std::size_t count,
                                        std::uint64_t total, BitReader& source) {
  switch (codec) {
    case IndexCodec::kI32:
      return i32_decode(count, source);
    case IndexCodec::kRtc:
      return rtc_decode(count, kRtcBound, source);
    case IndexCodec::kBic:
      return bic_decode(count, total, source);
    case IndexCodec::kGamma:
      return gamma_index_decode(count, source);
  }
  throw ContractViolation("unknown index codec");
}

}  // namespace pec
