#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pec/arith.hpp"
#include "pec/bitio.hpp"
#include "pec/termination.hpp"

using namespace pec;

namespace {

FinalCoderState state_from(double u, double v, std::vector<std::uint8_t> prefix = {0x10}) {
  FinalCoderState fs;
  fs.low = static_cast<std::uint32_t>(std::llround(u * 4294967296.0));
  fs.range = static_cast<std::uint32_t>(std::llround((v - u) * 4294967296.0));
  fs.chain = ByteChain::with_prefix(prefix);
  return fs;
}

// State whose bounds are exactly [lower, upper] (both < 512).
FinalCoderState state_with_bounds(std::uint32_t lower, std::uint32_t upper) {
  FinalCoderState fs;
  fs.low = lower << 24;
  fs.range = static_cast<std::uint32_t>(((std::uint64_t{upper} + 1 - lower) << 24) + (1u << 23));
  fs.chain = ByteChain::with_prefix(std::vector<std::uint8_t>{0x33});
  return fs;
}

struct RandomStream {
  std::vector<std::uint8_t> bits;
  BinaryModel model;
  FinalCoderState final_state;
};

RandomStream random_stream(std::mt19937_64& rng, std::size_t max_len, Direction dir,
                           bool mirror) {
  RandomStream s;
  s.model = BinaryModel(1 + static_cast<std::uint32_t>(rng() % 65535));
  s.bits.resize(rng() % max_len);
  RangeEncoder enc(dir, mirror);
  for (auto& b : s.bits) {
    b = (rng() & 0xFFFF) >= s.model.p0 ? 1 : 0;
    enc.encode_bit(b != 0, s.model);
  }
  s.final_state = enc.finalize();
  return s;
}

enum class Continuation { kZeros, kOnes, kRandom };

std::vector<std::uint8_t> with_continuation(std::vector<std::uint8_t> bytes, Continuation c,
                                            std::mt19937_64& rng) {
  for (int i = 0; i < 8; ++i) {
    switch (c) {
      case Continuation::kZeros:
        bytes.push_back(0x00);
        break;
      case Continuation::kOnes:
        bytes.push_back(0xFF);
        break;
      case Continuation::kRandom:
        bytes.push_back(static_cast<std::uint8_t>(rng()));
        break;
    }
  }
  return bytes;
}

bool decodes(const std::vector<std::uint8_t>& bytes, const RandomStream& s) {
  RangeDecoder dec{ByteSource(bytes)};
  for (auto b : s.bits)
    if (dec.decode_bit(s.model) != (b != 0)) return false;
  return true;
}

// Independent evaluation of the bounds from the real-valued interval.
std::pair<long, long> reference_bounds(const FinalCoderState& fs) {
  const long double u = fs.low / 4294967296.0L;
  const long double v = (static_cast<long double>(fs.low) + fs.range) / 4294967296.0L;
  return {static_cast<long>(std::ceil(256.0L * u)), static_cast<long>(std::floor(256.0L * v)) - 1};
}

}  // namespace

TEST_CASE("valid byte set for an interior interval") {
  const auto set = valid_byte_set(state_from(0.3, 0.35));
  CHECK(set.lower == 77);
  CHECK(set.upper == 88);
  CHECK(set.size() == 12);
  CHECK_FALSE(set.renormalized);
  for (const auto& m : set.members()) CHECK_FALSE(m.carry);
}

TEST_CASE("narrow interval straddling a byte boundary needs renormalization") {
  const auto fs = state_from(0.501, 0.505);
  const auto [u_bound, v_bound] = reference_bounds(fs);
  CHECK(u_bound == 129);
  CHECK(v_bound == 128);
  const auto set = valid_byte_set(fs);
  CHECK(set.renormalized);
  CHECK(set.renorm_byte == 128);
  CHECK(set.lower <= set.upper);
  CHECK(set.size() >= 254);
  const auto stream = terminate_single(fs);
  CHECK(stream.appended == 2);
}

TEST_CASE("interval above one gives carry-flagged members") {
  const auto set = valid_byte_set(state_from(0.999, 1.2));
  CHECK(set.lower == 256);
  CHECK(set.upper == 306);
  const auto members = set.members();
  REQUIRE(members.size() == 51);
  for (std::size_t i = 0; i < members.size(); ++i) {
    CHECK(members[i].value == i);
    CHECK(members[i].carry);
  }
}

TEST_CASE("single termination picks the smallest value") {
  const auto stream = terminate_single(state_from(0.3, 0.35));
  CHECK(stream.bytes == std::vector<std::uint8_t>{0x10, 77});
  CHECK(stream.appended == 1);
  CHECK_FALSE(stream.carried);
}

TEST_CASE("carry folds into the held byte and its pending run") {
  const auto stream = terminate_single(state_from(0.999, 1.2, {0x41}));
  CHECK(stream.carried);
  CHECK(stream.bytes == std::vector<std::uint8_t>{0x42, 0x00});

  FinalCoderState fs = state_from(0.999, 1.2, {0x41});
  fs.chain.push(0xFF);
  fs.chain.push(0xFF);
  const auto rippled = terminate_single(fs);
  CHECK(rippled.bytes == std::vector<std::uint8_t>{0x42, 0x00, 0x00, 0x00});
}

TEST_CASE("fresh zero-symbol stream terminates as a single zero byte") {
  const auto stream = terminate_single(RangeEncoder().finalize());
  CHECK(stream.bytes == std::vector<std::uint8_t>{0x00});
}

TEST_CASE("joint termination shares the smallest common byte") {
  const auto fwd = state_with_bounds(77, 88);
  const auto bwd = state_with_bounds(80, 95);
  REQUIRE(valid_byte_set(fwd).lower == 77);
  REQUIRE(valid_byte_set(fwd).upper == 88);
  REQUIRE(valid_byte_set(bwd).lower == 80);
  REQUIRE(valid_byte_set(bwd).upper == 95);
  const auto joint = joint_terminate(fwd, bwd, PackingMode::kForwardBackward);
  CHECK(joint.shared);
  CHECK(joint.junction == 80);
  CHECK(joint.forward.bytes.back() == 80);
  CHECK(joint.backward.bytes.back() == 80);
  const auto segment = assemble_segment(joint);
  CHECK(segment.size() == joint.forward.bytes.size() + joint.backward.bytes.size() - 1);
}

TEST_CASE("joint termination with a carry in the forward stream") {
  const auto fwd = state_with_bounds(250, 270);
  const auto bwd = state_with_bounds(5, 9);
  const auto joint = joint_terminate(fwd, bwd, PackingMode::kForwardBackward);
  CHECK(joint.shared);
  CHECK(joint.junction == 5);
  CHECK(joint.forward.carried);
  CHECK_FALSE(joint.backward.carried);
  CHECK(joint.forward.bytes == std::vector<std::uint8_t>{0x34, 5});
}

TEST_CASE("disjoint sets terminate separately") {
  const auto joint = joint_terminate(state_with_bounds(10, 20), state_with_bounds(100, 110),
                                     PackingMode::kForwardBackward);
  CHECK_FALSE(joint.shared);
  CHECK(joint.forward.bytes.back() == 10);
  CHECK(joint.backward.bytes.back() == 100);
  const auto segment = assemble_segment(joint);
  CHECK(segment.size() == joint.forward.bytes.size() + joint.backward.bytes.size());
}

TEST_CASE("joint selection matches brute-force intersection") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3000; ++trial) {
    FinalCoderState f, b;
    f.low = static_cast<std::uint32_t>(rng());
    b.low = static_cast<std::uint32_t>(rng());
    f.range = static_cast<std::uint32_t>(std::exp2(24.0 + 8.0 * ((rng() >> 11) * 0x1p-53)));
    b.range = static_cast<std::uint32_t>(std::exp2(24.0 + 8.0 * ((rng() >> 11) * 0x1p-53)));
    f.range = std::max(f.range, kRangeMin);
    b.range = std::max(b.range, kRangeMin);
    f.chain = b.chain = ByteChain::with_prefix(std::vector<std::uint8_t>{0x20});
    const auto fs = valid_byte_set(f);
    const auto bs = valid_byte_set(b);
    for (PackingMode mode : {PackingMode::kForwardBackward, PackingMode::kForwardReversed}) {
      int expected = -1;
      for (int z = 0; z < 256 && expected < 0; ++z) {
        bool in_f = false, in_b = false;
        const int zb = mode == PackingMode::kForwardReversed
                           ? reverse_byte(static_cast<std::uint8_t>(z))
                           : z;
        for (std::uint32_t t = fs.lower; t <= fs.upper; ++t) in_f |= (t % 256 == unsigned(z));
        for (std::uint32_t t = bs.lower; t <= bs.upper; ++t) in_b |= (t % 256 == unsigned(zb));
        if (in_f && in_b) expected = z;
      }
      const auto joint = joint_terminate(f, b, mode);
      CHECK(joint.shared == (expected >= 0));
      if (expected >= 0) CHECK(joint.junction == expected);
    }
  }
}

TEST_CASE("every member of every valid set decodes under any continuation") {
  std::mt19937_64 rng(2024);
  int renormalized = 0, carried = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const auto s = random_stream(rng, 400, Direction::kForward, false);
    const auto set = valid_byte_set(s.final_state);
    renormalized += set.renormalized;
    for (std::uint32_t t = set.lower; t <= set.upper; ++t) {
      const auto stream = terminate_with(s.final_state, set, t);
      carried += stream.carried;
      for (auto c : {Continuation::kZeros, Continuation::kOnes, Continuation::kRandom})
        REQUIRE(decodes(with_continuation(stream.bytes, c, rng), s));
    }
  }
  CHECK(carried > 0);
  CHECK(renormalized > 0);
}

TEST_CASE("paired streams decode from their assembled segment") {
  std::mt19937_64 rng(31);
  int shared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const PackingMode mode =
        trial % 2 ? PackingMode::kForwardReversed : PackingMode::kForwardBackward;
    const bool mirror = mode == PackingMode::kForwardReversed;
    const auto f = random_stream(rng, 2000, Direction::kForward, false);
    const auto b = random_stream(rng, 2000, Direction::kBackward, mirror);
    const auto joint = joint_terminate(f.final_state, b.final_state, mode);
    shared += joint.shared;
    const auto segment = assemble_segment(joint);
    RangeDecoder fd{ByteSource(segment, 0, segment.size(), Direction::kForward)};
    for (auto bit : f.bits) REQUIRE(fd.decode_bit(f.model) == (bit != 0));
    RangeDecoder bd{ByteSource(segment, 0, segment.size(), Direction::kBackward, mirror)};
    for (auto bit : b.bits) REQUIRE(bd.decode_bit(b.model) == (bit != 0));
  }
  CHECK(shared > 0);
}

TEST_CASE("extra bit accounting") {
  CHECK(single_extra_bits(1, 3.5) == doctest::Approx(4.5));
  CHECK(pair_extra_bits(1, 1, true, 3.0, 3.0) == doctest::Approx(1.0));
  CHECK(pair_extra_bits(1, 1, false, 3.0, 3.0) == doctest::Approx(5.0));
}

TEST_CASE("pair accounting equals single accounting minus four bits per share") {
  std::mt19937_64 rng(5);
  TerminationStats uni, fb;
  for (int trial = 0; trial < 20000; ++trial) {
    const auto f = random_stream(rng, 300, Direction::kForward, false).final_state;
    const auto b = random_stream(rng, 300, Direction::kBackward, false).final_state;
    const auto sf = terminate_single(f);
    const auto sb = terminate_single(b);
    for (const auto* s : {&sf, &sb}) {
      CHECK(s->pending_bits > 0.0);
      CHECK(s->pending_bits <= 8.0);
      CHECK((s->appended == 1 || s->appended == 2));
    }
    uni.add_single(sf);
    uni.add_single(sb);
    fb.add_pair(joint_terminate(f, b, PackingMode::kForwardBackward));
  }
  CHECK(fb.mean_extra_bits() ==
        doctest::Approx(uni.mean_extra_bits() - 4.0 * fb.share_ratio()).epsilon(1e-9));

  TerminationStats merged = uni;
  merged.merge(fb);
  CHECK(merged.streams() == uni.streams() + fb.streams());
  CHECK(termination_csv_row(PackingMode::kForwardBackward, fb).rfind("fb,40000,", 0) == 0);
}
