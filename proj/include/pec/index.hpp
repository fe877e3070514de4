#pragma once

// Entry-point index codecs. The index is the list of per-segment byte counts;
// entry points are its prefix sums.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pec/bitio.hpp"
#include "pec/common.hpp"

namespace pec {

// Exclusive bound on segment sizes coded by RTC inside containers.
inline constexpr std::uint32_t kRtcBound = 1u << 24;

// h_n = b_1 + ... + b_n for n = 1..N.
std::vector<std::uint64_t> entry_points(std::span<const std::uint32_t> sizes);
// Throw ContractViolation on an empty list.
double mean_size(std::span<const std::uint32_t> sizes);
std::uint32_t min_size(std::span<const std::uint32_t> sizes);

// Binary tree of running maxima over a power-of-two number of leaves, using
// 1-based heap numbering: node i has children 2i and 2i+1, leaves occupy
// [N, 2N). selection(i) is true when the maximum comes from the left child
// (ties go left).
class RangeTree {
 public:
  explicit RangeTree(std::span<const std::uint32_t> leaves);

  std::size_t leaf_count() const { return leaves_; }
  std::uint32_t value(std::size_t node) const { return values_[node]; }
  bool selection(std::size_t node) const { return selection_[node] != 0; }
  std::uint32_t minimum() const { return minimum_; }

  // Checks a(2i+1-x) == a(i) and min <= a(2i+x) <= a(i) - 1 + x for every
  // internal node (with ties, x = 1 and both children equal a(i)).
  bool properties_hold() const;

 private:
  std::size_t leaves_;
  std::vector<std::uint32_t> values_;
  std::vector<std::uint8_t> selection_;
  std::uint32_t minimum_;
};

// Range-tree compression. Sizes are padded with their minimum up to a power
// of two; `bound` is an exclusive upper bound on every value.
std::size_t rtc_encode(std::span<const std::uint32_t> sizes, std::uint32_t bound,
                       BitWriter& sink);
std::vector<std::uint32_t> rtc_decode(std::size_t count, std::uint32_t bound,
                                      BitReader& source);

// Binary interpolative coding of entry points, given their total.
std::size_t bic_encode(std::span<const std::uint32_t> sizes, std::uint64_t total,
                       BitWriter& sink);
std::vector<std::uint32_t> bic_decode(std::size_t count, std::uint64_t total,
                                      BitReader& source);

// Elias-gamma of (size + 1).
std::size_t gamma_index_encode(std::span<const std::uint32_t> sizes, BitWriter& sink);
std::vector<std::uint32_t> gamma_index_decode(std::size_t count, BitReader& source);

// 32-bit little-endian words.
std::size_t i32_encode(std::span<const std::uint32_t> sizes, BitWriter& sink);
std::vector<std::uint32_t> i32_decode(std::size_t count, BitReader& source);

// Dispatch on codec. `total` is the data-region size (used by BIC).
std::size_t encode_index(IndexCodec codec, std::span<const std::uint32_t> sizes,
                         std::uint64_t total, BitWriter& sink);
std::vector<std::uint32_t> decode_index(IndexCodec codec, std::size_t count,
                                        std::uint64_t total, BitReader& source);

}  // namespace pec
