#pragma once

// Shared enums and error types for the parallel entropy coding library.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pec {

// A caller broke a documented precondition (value out of range, bad model).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bit or byte source ran out in the middle of a codeword or field.
class TruncatedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decoded data is internally inconsistent (value outside its feasible range).
class CorruptDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Direction : std::uint8_t { kForward, kBackward };

// How streams are laid out in the data region.
//   kUni: one forward stream per segment.
//   kForwardBackward: forward + backward pair per segment, same bit order.
//   kForwardReversed: as above, backward bytes stored bit-reversed.
enum class PackingMode : std::uint8_t {
  kUni = 0,
  kForwardBackward = 1,
  kForwardReversed = 2,
};

enum class IndexCodec : std::uint8_t {
  kI32 = 0,
  kRtc = 1,
  kBic = 2,
  kGamma = 3,
};

inline bool is_bidirectional(PackingMode mode) {
  return mode != PackingMode::kUni;
}

std::string_view to_string(PackingMode mode);
std::string_view to_string(IndexCodec codec);
PackingMode parse_packing_mode(std::string_view text);
IndexCodec parse_index_codec(std::string_view text);

}  // namespace pec
