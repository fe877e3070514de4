#pragma once

// Arithmetic-coder termination: valid termination byte sets, single-stream
// termination, joint termination of forward/backward pairs, and overhead
// accounting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pec/arith.hpp"
#include "pec/common.hpp"

namespace pec {

struct StoredByte {
  std::uint8_t value = 0;
  bool carry = false;
};

// All termination values T with lower <= T <= upper (T >= 256 means the byte
// T - 256 is written with a carry into the preceding bytes). When the final
// interval was too narrow, one extra byte is emitted first and the bounds
// refer to the rescaled interval.
struct ValidByteSet {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;
  bool renormalized = false;
  std::uint8_t renorm_byte = 0;
  std::uint32_t low = 0;
  std::uint32_t range = 0;

  std::size_t size() const { return upper - lower + 1; }
  // Termination value that stores `stored`; the carry-free one if both exist.
  std::optional<std::uint32_t> value_for_stored(std::uint8_t stored) const;
  bool contains_stored(std::uint8_t stored) const {
    return value_for_stored(stored).has_value();
  }
  std::vector<StoredByte> members() const;
};

ValidByteSet valid_byte_set(const FinalCoderState& fs);

struct TerminatedStream {
  // Complete stream in the order its decoder reads it (before any reversal
  // or bit mirroring applied at storage time).
  std::vector<std::uint8_t> bytes;
  // Bytes appended by termination, renormalization byte included.
  std::size_t appended = 0;
  double pending_bits = 0.0;
  bool carried = false;
  bool renormalized = false;
};

// Writes termination value `value` (must lie in `set`).
TerminatedStream terminate_with(const FinalCoderState& fs,
                                const ValidByteSet& set, std::uint32_t value);
// Smallest valid value.
TerminatedStream terminate_single(const FinalCoderState& fs);

struct JointTermination {
  TerminatedStream forward;
  TerminatedStream backward;
  bool shared = false;
  // Stored junction byte when shared.
  std::uint8_t junction = 0;
  bool bit_reversed = false;
};

// `mode` must be bidirectional. The smallest stored value valid for both
// streams is shared; otherwise both streams are terminated separately.
JointTermination joint_terminate(const FinalCoderState& forward,
                                 const FinalCoderState& backward,
                                 PackingMode mode);

// Backward stream bytes in storage order (reversed, bit-mirrored in FR).
std::vector<std::uint8_t> stored_backward_bytes(const TerminatedStream& backward,
                                                bool bit_reversed);
// Forward bytes followed by the stored backward bytes, with a shared junction
// byte written once.
std::vector<std::uint8_t> assemble_segment(const JointTermination& joint);

double single_extra_bits(std::size_t appended, double pending);
// Per-stream average for a pair.
double pair_extra_bits(std::size_t appended_forward,
                       std::size_t appended_backward, bool shared,
                       double pending_forward, double pending_backward);

class TerminationStats {
 public:
  void add_single(const TerminatedStream& stream);
  void add_pair(const JointTermination& joint);
  void merge(const TerminationStats& other);

  std::uint64_t streams() const { return streams_; }
  std::uint64_t pairs() const { return pairs_; }
  std::uint64_t shares() const { return shares_; }
  double share_ratio() const;
  // Mean extra bits per bitstream.
  double mean_extra_bits() const;

 private:
  std::uint64_t streams_ = 0;
  std::uint64_t pairs_ = 0;
  std::uint64_t shares_ = 0;
  double extra_bits_ = 0.0;
};

inline constexpr const char* kTerminationCsvHeader =
    "mode,streams,share_ratio,mean_extra_bits";
std::string termination_csv_row(PackingMode mode, const TerminationStats& stats);

}  // namespace pec
