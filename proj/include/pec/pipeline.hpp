#pragma once

// Shard-parallel encoding and decoding into a container.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pec/container.hpp"
#include "pec/termination.hpp"

namespace pec {

struct ShardRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const ShardRange&) const = default;
};

// Shard k covers [floor(k*N/S), floor((k+1)*N/S)).
std::vector<ShardRange> shard_ranges(std::size_t symbols, std::size_t streams);

struct EncodeOptions {
  PackingMode mode = PackingMode::kForwardReversed;
  IndexCodec codec = IndexCodec::kRtc;
  std::uint32_t streams = 1;
  // 0 = hardware concurrency, 1 = sequential.
  unsigned threads = 0;
};

struct EncodeResult {
  std::vector<std::uint8_t> container;
  // Termination accounting for every stream in the container.
  TerminationStats termination;
  std::vector<std::uint32_t> segment_sizes;
};

// Codes one stream and returns the state just before termination.
FinalCoderState encode_stream(std::span<const std::uint8_t> symbols, const SymbolModel& model,
                              Direction direction = Direction::kForward,
                              bool bit_reversed = false);
void decode_stream(RangeDecoder& decoder, const SymbolModel& model,
                   std::span<std::uint8_t> out);

EncodeResult encode_parallel_detailed(std::span<const std::uint8_t> symbols,
                                      const SymbolModel& model, const EncodeOptions& options);
std::vector<std::uint8_t> encode_parallel(std::span<const std::uint8_t> symbols,
                                          const SymbolModel& model,
                                          const EncodeOptions& options);
std::vector<std::uint8_t> decode_parallel(std::span<const std::uint8_t> container,
                                          unsigned threads = 0);

// Runs body(i) for i in [0, n) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body);

}  // namespace pec

#include "pec/detail/parallel_for.hpp"
