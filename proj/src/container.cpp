#include "pec/container.hpp"

#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "pec/bitio.hpp"
#include "pec/index.hpp"

namespace pec {
namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'E', 'C', '1'};
constexpr std::uint8_t kModelBernoulli = 0;
constexpr std::uint8_t kModelOrder0 = 1;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t le(int n, const char* field) {
    need(static_cast<std::size_t>(n), field);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    need(n, field);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* field) const {
    if (bytes_.size() - pos_ < n)
      throw TruncatedError(std::string("container truncated in ") + field);
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t model_param_bytes(const SymbolModel& model) {
  return std::holds_alternative<BinaryModel>(model) ? 2 : 2 * CdfModel::kSymbols;
}

std::size_t segment_count(PackingMode mode, std::uint32_t streams) {
  if (streams == 0) throw ContractViolation("stream count must be >= 1");
  if (is_bidirectional(mode)) {
    if (streams % 2 != 0)
      throw ContractViolation("bidirectional packing needs an even stream count");
    return streams / 2;
  }
  return streams;
}

SegmentMap::SegmentMap(std::span<const std::uint32_t> sizes) {
  bounds_.reserve(sizes.size() + 1);
  std::uint64_t acc = 0;
  for (std::uint32_t b : sizes) bounds_.push_back(acc += b);
}

std::vector<std::uint8_t> write_container(const Header& header,
                                          std::span<const std::vector<std::uint8_t>> segments) {
  const std::size_t entries = segment_count(header.mode, header.streams);
  if (segments.size() != entries)
    throw ContractViolation("segment count does not match stream count");

  std::vector<std::uint32_t> sizes;
  sizes.reserve(entries);
  std::uint64_t total = 0;
  for (const auto& seg : segments) {
    if (seg.size() > std::numeric_limits<std::uint32_t>::max())
      throw ContractViolation("segment too large");
    sizes.push_back(static_cast<std::uint32_t>(seg.size()));
    total += seg.size();
  }
  if (total != header.data_size)
    throw FormatError(FormatError::Reason::kIndexMismatch,
                      "segment total does not match header data size");

  BitWriter index;
  encode_index(header.codec, sizes, total, index);
  if (index.bytes().size() > std::numeric_limits<std::uint16_t>::max())
    throw ContractViolation("coded index exceeds 65535 bytes");

  std::vector<std::uint8_t> out;
  out.reserve(kHeaderFixedBytes + model_param_bytes(header.model) + index.bytes().size() + total);
  for (std::uint8_t m : kMagic) out.push_back(m);
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(static_cast<unsigned>(header.mode) |
                                          static_cast<unsigned>(header.codec) << 2));
  out.push_back(std::holds_alternative<BinaryModel>(header.model) ? kModelBernoulli
                                                                  : kModelOrder0);
  out.push_back(0);
  put_le(out, header.streams, 4);
  put_le(out, header.symbols, 8);
  put_le(out, header.data_size, 4);
  if (const auto* bin = std::get_if<BinaryModel>(&header.model)) {
    put_le(out, bin->p0, 2);
  } else {
    for (std::uint16_t f : std::get<CdfModel>(header.model).frequencies()) put_le(out, f, 2);
  }
  put_le(out, index.bytes().size(), 2);
  out.insert(out.end(), index.bytes().begin(), index.bytes().end());
  for (const auto& seg : segments) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

ParsedContainer read_container(std::span<const std::uint8_t> bytes) {
  using Reason = FormatError::Reason;
  Cursor cur(bytes);
  ParsedContainer pc;

  auto magic = cur.take(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw FormatError(Reason::kBadMagic, "not a PEC1 container");
  const auto version = cur.le(1, "version");
  if (version != kContainerVersion)
    throw FormatError(Reason::kUnsupportedVersion,
                      "unsupported container version " + std::to_string(version));
  const auto flags = cur.le(1, "flags");
  if ((flags & 3) > 2 || (flags >> 4) != 0)
    throw FormatError(Reason::kBadField, "invalid flags byte");
  pc.header.mode = static_cast<PackingMode>(flags & 3);
  pc.header.codec = static_cast<IndexCodec>((flags >> 2) & 3);
  const auto model_id = cur.le(1, "model id");
  if (cur.le(1, "reserved") != 0) throw FormatError(Reason::kBadField, "reserved byte set");
  pc.header.streams = static_cast<std::uint32_t>(cur.le(4, "stream count"));
  pc.header.symbols = cur.le(8, "symbol count");
  pc.header.data_size = static_cast<std::uint32_t>(cur.le(4, "data size"));

  try {
    if (model_id == kModelBernoulli) {
      pc.header.model = BinaryModel(static_cast<std::uint32_t>(cur.le(2, "model")));
    } else if (model_id == kModelOrder0) {
      std::vector<std::uint32_t> freqs(CdfModel::kSymbols);
      for (auto& f : freqs) f = static_cast<std::uint32_t>(cur.le(2, "model"));
      pc.header.model = CdfModel::from_frequencies(freqs);
    } else {
      throw FormatError(Reason::kBadField, "unknown model id");
    }
  } catch (const ContractViolation& e) {
    throw FormatError(Reason::kBadField, std::string("invalid model: ") + e.what());
  }
  pc.header_bytes = cur.position();

  std::size_t entries;
  try {
    entries = segment_count(pc.header.mode, pc.header.streams);
  } catch (const ContractViolation& e) {
    throw FormatError(Reason::kBadField, e.what());
  }

  pc.index_bytes = static_cast<std::size_t>(cur.le(2, "index length"));
  auto index = cur.take(pc.index_bytes, "index");
  BitReader reader(index);
  try {
    pc.sizes = decode_index(pc.header.codec, entries, pc.header.data_size, reader);
  } catch (const TruncatedError&) {
    throw TruncatedError("container truncated in index");
  }
  pc.index_bits = reader.bit_position();
  const std::uint64_t sum =
      std::accumulate(pc.sizes.begin(), pc.sizes.end(), std::uint64_t{0});
  if (sum != pc.header.data_size)
    throw FormatError(Reason::kIndexMismatch, "index does not sum to data size");

  if (cur.remaining() < pc.header.data_size) throw TruncatedError("container truncated in data");
  if (cur.remaining() > pc.header.data_size)
    throw FormatError(Reason::kBadField, "trailing bytes after data region");
  pc.data = cur.take(pc.header.data_size, "data");
  pc.segments = SegmentMap(pc.sizes);
  return pc;
}

ByteSource segment_source(const ParsedContainer& container, std::size_t j,
                          Direction direction) {
  const auto& map = container.segments;
  if (j < 1 || j > map.count()) throw ContractViolation("segment number out of range");
  const bool mirror = direction == Direction::kBackward &&
                      container.header.mode == PackingMode::kForwardReversed;
  return ByteSource(container.data, map.begin(j), map.end(j), direction, mirror);
}

}  // namespace pec
