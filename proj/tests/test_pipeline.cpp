#include <random>
#include <vector>

#include "doctest.h"
#include "pec/container.hpp"
#include "pec/pipeline.hpp"

using namespace pec;

namespace {

std::vector<std::uint8_t> skewed_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<int> geo(0.2);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(std::min(geo(rng), 255));
  return v;
}

std::vector<std::uint8_t> random_bits(std::size_t n, double p0, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution one(1.0 - p0);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = one(rng) ? 1 : 0;
  return v;
}

CdfModel model_for(const std::vector<std::uint8_t>& data) {
  std::vector<std::uint64_t> counts(256, 0);
  for (auto b : data) ++counts[b];
  return CdfModel::from_counts(counts);
}

}  // namespace

TEST_CASE("shard ranges") {
  const auto r = shard_ranges(10, 3);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == ShardRange{0, 3});
  CHECK(r[1] == ShardRange{3, 6});
  CHECK(r[2] == ShardRange{6, 10});

  const auto e = shard_ranges(2, 4);
  CHECK(e[0].size() == 0);
  CHECK(e[1].size() == 1);
  CHECK(e[2].size() == 0);
  CHECK(e[3].size() == 1);
  CHECK_THROWS_AS(shard_ranges(5, 0), ContractViolation);
}

TEST_CASE("parallel_for visits every index and propagates exceptions") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw CorruptDataError("x");
                               }),
                  CorruptDataError);
}

TEST_CASE("roundtrip across modes, codecs and stream counts") {
  const auto data = skewed_bytes(20000, 1);
  const SymbolModel model = model_for(data);
  for (auto mode : {PackingMode::kUni, PackingMode::kForwardBackward,
                    PackingMode::kForwardReversed}) {
    for (auto codec :
         {IndexCodec::kI32, IndexCodec::kRtc, IndexCodec::kBic, IndexCodec::kGamma}) {
      for (std::uint32_t streams : {1u, 2u, 4u, 8u, 64u}) {
        if (is_bidirectional(mode) && streams % 2 != 0) continue;
        EncodeOptions opt{mode, codec, streams, 2};
        const auto result = encode_parallel_detailed(data, model, opt);
        CHECK(decode_parallel(result.container, 2) == data);
        CHECK(result.termination.streams() == streams);
        const auto pc = read_container(result.container);
        CHECK(pc.sizes == result.segment_sizes);
        CHECK(pc.header.streams == streams);
      }
    }
  }
}

TEST_CASE("binary model roundtrip") {
  const auto bits = random_bits(50000, 0.9, 3);
  for (auto mode : {PackingMode::kUni, PackingMode::kForwardReversed}) {
    EncodeOptions opt{mode, IndexCodec::kRtc, 16, 1};
    const auto out = encode_parallel(bits, BinaryModel::from_probability(0.9), opt);
    CHECK(decode_parallel(out) == bits);
    CHECK(out.size() < bits.size() / 8 / 2);
  }
  EncodeOptions opt{PackingMode::kUni, IndexCodec::kRtc, 1, 1};
  const std::vector<std::uint8_t> bad{0, 1, 2};
  CHECK_THROWS_AS(encode_parallel(bad, BinaryModel{}, opt), ContractViolation);
}

TEST_CASE("output does not depend on thread count") {
  const auto data = skewed_bytes(30000, 9);
  const SymbolModel model = model_for(data);
  EncodeOptions opt{PackingMode::kForwardReversed, IndexCodec::kRtc, 32, 1};
  const auto reference = encode_parallel(data, model, opt);
  for (unsigned t : {2u, 3u, 8u, 0u}) {
    opt.threads = t;
    CHECK(encode_parallel(data, model, opt) == reference);
    CHECK(decode_parallel(reference, t) == data);
  }
}

TEST_CASE("empty input and more streams than symbols") {
  const SymbolModel model = CdfModel{};
  for (auto mode : {PackingMode::kUni, PackingMode::kForwardBackward,
                    PackingMode::kForwardReversed}) {
    EncodeOptions opt{mode, IndexCodec::kRtc, 4, 1};
    const std::vector<std::uint8_t> empty;
    CHECK(decode_parallel(encode_parallel(empty, model, opt)).empty());
    const std::vector<std::uint8_t> one{42};
    CHECK(decode_parallel(encode_parallel(one, model, opt)) == one);
  }
}

TEST_CASE("odd stream count is rejected for bidirectional modes") {
  EncodeOptions opt{PackingMode::kForwardBackward, IndexCodec::kRtc, 3, 1};
  const std::vector<std::uint8_t> data{1, 2, 3};
  CHECK_THROWS_AS(encode_parallel(data, CdfModel{}, opt), ContractViolation);
}

TEST_CASE("corrupted containers fail cleanly") {
  const auto data = skewed_bytes(5000, 4);
  EncodeOptions opt{PackingMode::kForwardReversed, IndexCodec::kRtc, 8, 1};
  const auto good = encode_parallel(data, model_for(data), opt);
  auto cut = good;
  cut.resize(cut.size() - 5);
  CHECK_THROWS(decode_parallel(cut));
  auto magic = good;
  magic[1] = 'Q';
  CHECK_THROWS_AS(decode_parallel(magic), FormatError);
}
