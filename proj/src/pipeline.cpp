#include "pec/pipeline.hpp"

#include <limits>

namespace pec {

std::vector<ShardRange> shard_ranges(std::size_t symbols, std::size_t streams) {
  if (streams == 0) throw ContractViolation("shard_ranges: need at least one stream");
  std::vector<ShardRange> ranges(streams);
  const auto n = static_cast<unsigned __int128>(symbols);
  for (std::size_t k = 0; k < streams; ++k) {
    ranges[k].begin = static_cast<std::size_t>(n * k / streams);
    ranges[k].end = static_cast<std::size_t>(n * (k + 1) / streams);
  }
  return ranges;
}

FinalCoderState encode_stream(std::span<const std::uint8_t> symbols, const SymbolModel& model,
                              Direction direction, bool bit_reversed) {
  RangeEncoder enc(direction, bit_reversed);
  if (const auto* bin = std::get_if<BinaryModel>(&model)) {
    for (std::uint8_t s : symbols) {
      if (s > 1) throw ContractViolation("bernoulli model codes only 0/1 symbols");
      enc.encode_bit(s != 0, *bin);
    }
  } else {
    const auto& cdf = std::get<CdfModel>(model);
    for (std::uint8_t s : symbols) enc.encode_symbol(s, cdf);
  }
  return enc.finalize();
}

void decode_stream(RangeDecoder& decoder, const SymbolModel& model, std::span<std::uint8_t> out) {
  if (const auto* bin = std::get_if<BinaryModel>(&model)) {
    for (auto& s : out) s = decoder.decode_bit(*bin) ? 1 : 0;
  } else {
    const auto& cdf = std::get<CdfModel>(model);
    for (auto& s : out) s = decoder.decode_symbol(cdf);
  }
}

EncodeResult encode_parallel_detailed(std::span<const std::uint8_t> symbols,
                                      const SymbolModel& model, const EncodeOptions& options) {
  const std::size_t entries = segment_count(options.mode, options.streams);
  const bool bidirectional = is_bidirectional(options.mode);
  const bool mirror = options.mode == PackingMode::kForwardReversed;
  const auto shards = shard_ranges(symbols.size(), options.streams);

  // Even shards run forward, odd shards backward in bidirectional modes.
  std::vector<FinalCoderState> finals(shards.size());
  parallel_for(shards.size(), options.threads, [&](std::size_t k) {
    const bool backward = bidirectional && (k % 2 == 1);
    finals[k] = encode_stream(symbols.subspan(shards[k].begin, shards[k].size()), model,
                              backward ? Direction::kBackward : Direction::kForward,
                              backward && mirror);
  });

  std::vector<std::vector<std::uint8_t>> segments(entries);
  std::vector<TerminationStats> stats(entries);
  parallel_for(entries, options.threads, [&](std::size_t j) {
    if (bidirectional) {
      const JointTermination joint =
          joint_terminate(finals[2 * j], finals[2 * j + 1], options.mode);
      stats[j].add_pair(joint);
      segments[j] = assemble_segment(joint);
    } else {
      TerminatedStream stream = terminate_single(finals[j]);
      stats[j].add_single(stream);
      segments[j] = std::move(stream.bytes);
    }
  });

  EncodeResult result;
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < entries; ++j) {
    result.termination.merge(stats[j]);
    result.segment_sizes.push_back(static_cast<std::uint32_t>(segments[j].size()));
    total += segments[j].size();
  }
  if (total > std::numeric_limits<std::uint32_t>::max())
    throw ContractViolation("data region exceeds 4 GiB");

  Header header;
  header.mode = options.mode;
  header.codec = options.codec;
  header.model = model;
  header.streams = options.streams;
  header.symbols = symbols.size();
  header.data_size = static_cast<std::uint32_t>(total);
  result.container = write_container(header, segments);
  return result;
}

std::vector<std::uint8_t> encode_parallel(std::span<const std::uint8_t> symbols,
                                          const SymbolModel& model,
                                          const EncodeOptions& options) {
  return encode_parallel_detailed(symbols, model, options).container;
}

std::vector<std::uint8_t> decode_parallel(std::span<const std::uint8_t> container,
                                          unsigned threads) {
  const ParsedContainer pc = read_container(container);
  const Header& h = pc.header;
  if (h.symbols > std::numeric_limits<std::size_t>::max() / 2)
    throw FormatError(FormatError::Reason::kBadField, "symbol count too large");
  const bool bidirectional = is_bidirectional(h.mode);
  const auto shards = shard_ranges(static_cast<std::size_t>(h.symbols), h.streams);

  std::vector<std::uint8_t> out(static_cast<std::size_t>(h.symbols));
  parallel_for(shards.size(), threads, [&](std::size_t k) {
    const std::size_t segment = bidirectional ? k / 2 + 1 : k + 1;
    const Direction dir =
        bidirectional && k % 2 == 1 ? Direction::kBackward : Direction::kForward;
    RangeDecoder decoder(segment_source(pc, segment, dir));
    decode_stream(decoder, h.model,
                  std::span<std::uint8_t>(out).subspan(shards[k].begin, shards[k].size()));
  });
  return out;
}

}  // namespace pec
