#include "pec/common.hpp"

#include <string>

namespace pec {

std::string_view to_string(PackingMode mode) {
  switch (mode) {
    case PackingMode::kUni:
      return "uni";
    case PackingMode::kForwardBackward:
      return "fb";
    case PackingMode::kForwardReversed:
      return "fr";
  }
  return "?";
}

std::string_view to_string(IndexCodec codec) {
  switch (codec) {
    case IndexCodec::kI32:
      return "i32";
    case IndexCodec::kRtc:
      return "rtc";
    case IndexCodec::kBic:
      return "bic";
    case IndexCodec::kGamma:
      return "gamma";
  }
  return "?";
}

PackingMode parse_packing_mode(std::string_view text) {
  if (text == "uni") return PackingMode::kUni;
  if (text == "fb") return PackingMode::kForwardBackward;
  if (text == "fr") return PackingMode::kForwardReversed;
  throw ContractViolation("unknown packing mode: " + std::string(text));
}

IndexCodec parse_index_codec(std::string_view text) {
  if (text == "i32") return IndexCodec::kI32;
  if (text == "rtc") return IndexCodec::kRtc;
  if (text == "bic") return IndexCodec::kBic;
  if (text == "gamma") return IndexCodec::kGamma;
  throw ContractViolation("unknown index codec: " + std::string(text));
}

}  // namespace pec
