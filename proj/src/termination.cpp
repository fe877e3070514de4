#include "pec/termination.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <stdexcept>

#include "pec/bitio.hpp"

namespace pec {
namespace {

constexpr std::uint64_t kByteUnit = 1u << 24;

void compute_bounds(std::uint32_t low, std::uint32_t range, std::uint32_t& lower,
                    std::int64_t& upper) {
  const std::uint64_t l = low;
  lower = static_cast<std::uint32_t>((l + kByteUnit - 1) / kByteUnit);
  upper = static_cast<std::int64_t>((l + range) / kByteUnit) - 1;
}

}  // namespace

std::optional<std::uint32_t> ValidByteSet::value_for_stored(std::uint8_t stored) const {
  for (std::uint32_t t = stored; t <= upper; t += 256)
    if (t >= lower) return t;
  return std::nullopt;
}

std::vector<StoredByte> ValidByteSet::members() const {
  std::vector<StoredByte> out;
  out.reserve(size());
  for (std::uint32_t t = lower; t <= upper; ++t)
    out.push_back({static_cast<std::uint8_t>(t & 0xFF), t >= 256});
  return out;
}

ValidByteSet valid_byte_set(const FinalCoderState& fs) {
  ValidByteSet set;
  set.low = fs.low;
  set.range = fs.range;
  std::int64_t upper;
  compute_bounds(set.low, set.range, set.lower, upper);
  if (upper < static_cast<std::int64_t>(set.lower)) {
    // Interval narrower than one byte step around a boundary: shift out the
    // top byte of L and rescale. 2^24 <= R < 2^25 here, so the rescaled
    // range saturates and the new bounds span at least 254 values.
    set.renormalized = true;
    set.renorm_byte = static_cast<std::uint8_t>(set.low >> 24);
    set.low <<= 8;
    set.range = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(set.range) << 8, kRangeInit));
    compute_bounds(set.low, set.range, set.lower, upper);
    if (upper < static_cast<std::int64_t>(set.lower))
      throw std::logic_error("termination set empty after renormalization");
  }
  set.upper = static_cast<std::uint32_t>(upper);
  return set;
}

TerminatedStream terminate_with(const FinalCoderState& fs, const ValidByteSet& set,
                                std::uint32_t value) {
  if (value < set.lower || value > set.upper)
    throw ContractViolation("termination value outside valid set");
  ByteChain chain = fs.chain;
  TerminatedStream out;
  out.pending_bits = pending_info(fs);
  out.renormalized = set.renormalized;
  if (set.renormalized) chain.push(set.renorm_byte);
  if (value >= 256) {
    chain.add_carry();
    out.carried = true;
  }
  chain.push(static_cast<std::uint8_t>(value & 0xFF));
  out.appended = set.renormalized ? 2 : 1;
  out.bytes = chain.materialize();
  return out;
}

TerminatedStream terminate_single(const FinalCoderState& fs) {
  const ValidByteSet set = valid_byte_set(fs);
  return terminate_with(fs, set, set.lower);
}

JointTermination joint_terminate(const FinalCoderState& forward,
                                 const FinalCoderState& backward, PackingMode mode) {
  if (!is_bidirectional(mode))
    throw ContractViolation("joint termination needs a bidirectional mode");
  const bool reversed = mode == PackingMode::kForwardReversed;
  const ValidByteSet fset = valid_byte_set(forward);
  const ValidByteSet bset = valid_byte_set(backward);

  JointTermination joint;
  joint.bit_reversed = reversed;
  for (unsigned s = 0; s < 256; ++s) {
    const auto stored = static_cast<std::uint8_t>(s);
    const auto tf = fset.value_for_stored(stored);
    if (!tf) continue;
    // The backward decoder sees the stored byte through the bit mirror in FR.
    const auto tb = bset.value_for_stored(reversed ? reverse_byte(stored) : stored);
    if (!tb) continue;
    joint.forward = terminate_with(forward, fset, *tf);
    joint.backward = terminate_with(backward, bset, *tb);
    joint.shared = true;
    joint.junction = stored;
    return joint;
  }
  joint.forward = terminate_with(forward, fset, fset.lower);
  joint.backward = terminate_with(backward, bset, bset.lower);
  return joint;
}

std::vector<std::uint8_t> stored_backward_bytes(const TerminatedStream& backward,
                                                bool bit_reversed) {
  std::vector<std::uint8_t> out(backward.bytes.rbegin(), backward.bytes.rend());
  if (bit_reversed)
    for (auto& b : out) b = reverse_byte(b);
  return out;
}

std::vector<std::uint8_t> assemble_segment(const JointTermination& joint) {
  std::vector<std::uint8_t> segment = joint.forward.bytes;
  std::vector<std::uint8_t> back = stored_backward_bytes(joint.backward, joint.bit_reversed);
  auto first = back.begin();
  if (joint.shared) {
    assert(!back.empty() && !segment.empty() && back.front() == segment.back());
    ++first;
  }
  segment.insert(segment.end(), first, back.end());
  return segment;
}

double single_extra_bits(std::size_t appended, double pending) {
  return 8.0 * static_cast<double>(appended) - pending;
}

double pair_extra_bits(std::size_t appended_forward, std::size_t appended_backward,
                       bool shared, double pending_forward, double pending_backward) {
  const double bytes =
      static_cast<double>(appended_forward + appended_backward) - (shared ? 1.0 : 0.0);
  return (8.0 * bytes - pending_forward - pending_backward) / 2.0;
}

void TerminationStats::add_single(const TerminatedStream& stream) {
  ++streams_;
  extra_bits_ += single_extra_bits(stream.appended, stream.pending_bits);
}

void TerminationStats::add_pair(const JointTermination& joint) {
  streams_ += 2;
  ++pairs_;
  if (joint.shared) ++shares_;
  extra_bits_ += 2.0 * pair_extra_bits(joint.forward.appended, joint.backward.appended,
                                       joint.shared, joint.forward.pending_bits,
                                       joint.backward.pending_bits);
}

void TerminationStats::merge(const TerminationStats& other) {
  streams_ += other.streams_;
  pairs_ += other.pairs_;
  shares_ += other.shares_;
  extra_bits_ += other.extra_bits_;
}

double TerminationStats::share_ratio() const {
  return pairs_ == 0 ? 0.0 : static_cast<double>(shares_) / static_cast<double>(pairs_);
}

double TerminationStats::mean_extra_bits() const {
  return streams_ == 0 ? 0.0 : extra_bits_ / static_cast<double>(streams_);
}

std::string termination_csv_row(PackingMode mode, const TerminationStats& stats) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s,%llu,%.6f,%.6f", std::string(to_string(mode)).c_str(),
                static_cast<unsigned long long>(stats.streams()), stats.share_ratio(),
                stats.mean_extra_bits());
  return buf;
}

}  // namespace pec
