#include "pec/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "pec/arith.hpp"
#include "pec/bitio.hpp"
#include "pec/index.hpp"
#include "pec/pipeline.hpp"

namespace pec {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Log2NormalSource::Log2NormalSource(double mean, double sigma, std::uint64_t seed,
                                   std::uint32_t max_value)
    : mu_(std::log2(mean) - std::numbers::ln2 * sigma * sigma / 2.0),
      sigma_(sigma),
      max_value_(max_value),
      rng_(seed),
      normal_(0.0, 1.0) {
  if (!(mean > 0.0) || !(sigma >= 0.0))
    throw ContractViolation("log2-normal source needs mean > 0 and sigma >= 0");
}

std::uint32_t Log2NormalSource::sample() {
  const double z = mu_ + sigma_ * normal_(rng_);
  const double b = std::round(std::exp2(z));
  return static_cast<std::uint32_t>(std::clamp(b, 1.0, static_cast<double>(max_value_)));
}

std::vector<std::uint32_t> Log2NormalSource::sample(std::size_t n) {
  std::vector<std::uint32_t> out(n);
  for (auto& b : out) b = sample();
  return out;
}

double log2_normal_entropy(double mean, double sigma) {
  using std::numbers::ln2;
  return std::log2(mean * sigma * ln2 * std::sqrt(2.0 * std::numbers::e * std::numbers::pi)) -
         ln2 * sigma * sigma / 2.0;
}

Log2NormalFit fit_log2_normal(std::span<const std::uint32_t> sizes) {
  if (sizes.size() < 2) throw ContractViolation("fit_log2_normal needs >= 2 samples");
  double sum = 0.0;
  for (std::uint32_t b : sizes) {
    if (b == 0) throw ContractViolation("fit_log2_normal needs positive samples");
    sum += std::log2(static_cast<double>(b));
  }
  const double n = static_cast<double>(sizes.size());
  const double mu = sum / n;
  double ss = 0.0;
  for (std::uint32_t b : sizes) {
    const double d = std::log2(static_cast<double>(b)) - mu;
    ss += d * d;
  }
  Log2NormalFit fit;
  fit.sigma = std::sqrt(ss / (n - 1.0));
  fit.mean = std::exp2(mu + std::numbers::ln2 * fit.sigma * fit.sigma / 2.0);
  if (std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) == sizes.end()) {
    fit.sigma = 0.0;
    fit.degenerate = true;
    fit.entropy = 0.0;
  } else {
    fit.entropy = log2_normal_entropy(fit.mean, fit.sigma);
  }
  return fit;
}

std::vector<RedundancyRow> redundancy_experiment(IndexCodec codec,
                                                 std::span<const double> log2_means,
                                                 std::span<const double> sigmas,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t entries, unsigned threads) {
  if (log2_means.empty() || sigmas.empty() || trials == 0 || entries < 2)
    throw ContractViolation("redundancy_experiment: empty grid");
  std::vector<RedundancyRow> rows(log2_means.size() * sigmas.size());
  parallel_for(rows.size(), threads, [&](std::size_t cell) {
    const double lm = log2_means[cell / sigmas.size()];
    const double sigma = sigmas[cell % sigmas.size()];
    const double mean = std::exp2(lm);
    Log2NormalSource source(mean, sigma, splitmix64(seed ^ splitmix64(cell)));
    double bits = 0.0, estimator_gap = 0.0, fit_entropy = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto sizes = source.sample(entries);
      BitWriter sink;
      const std::uint64_t total =
          std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
      const double trial_bits = static_cast<double>(encode_index(codec, sizes, total, sink));
      bits += trial_bits;
      estimator_gap += std::log2(mean_size(sizes)) + 2.0 - trial_bits / static_cast<double>(entries);
      fit_entropy += fit_log2_normal(sizes).entropy;
    }
    RedundancyRow& row = rows[cell];
    row.codec = codec;
    row.log2_mean = lm;
    row.sigma = sigma;
    row.rate = bits / static_cast<double>(trials * entries);
    row.entropy = log2_normal_entropy(mean, sigma);
    row.redundancy = row.rate - row.entropy;
    row.estimator = lm + 2.0 - row.entropy;
    row.estimate_minus_rate = estimator_gap / static_cast<double>(trials);
    row.fit_entropy = fit_entropy / static_cast<double>(trials);
  });
  return rows;
}

std::vector<SigmaAverage> average_by_sigma(std::span<const RedundancyRow> rows, double lo,
                                           double hi) {
  std::map<double, std::pair<SigmaAverage, std::size_t>> acc;
  for (const auto& r : rows) {
    if (r.log2_mean < lo || r.log2_mean > hi) continue;
    auto& [avg, n] = acc[r.sigma];
    avg.sigma = r.sigma;
    avg.redundancy += r.redundancy;
    avg.estimator += r.estimator;
    ++n;
  }
  std::vector<SigmaAverage> out;
  for (auto& [sigma, entry] : acc) {
    auto [avg, n] = entry;
    avg.redundancy /= static_cast<double>(n);
    avg.estimator /= static_cast<double>(n);
    out.push_back(avg);
  }
  return out;
}

namespace {

FinalCoderState random_binary_stream(std::mt19937_64& rng, Direction direction, bool mirror) {
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  std::uniform_int_distribution<int> length(64, 4096);
  const double p_zero = prob(rng);
  const int n = length(rng);
  const BinaryModel model = BinaryModel::from_probability(p_zero);
  const auto threshold = static_cast<std::uint32_t>(p_zero * 4294967296.0);
  RangeEncoder enc(direction, mirror);
  std::uint64_t word = 0;
  for (int i = 0; i < n; ++i) {
    if ((i & 1) == 0) word = rng();
    const auto draw = static_cast<std::uint32_t>((i & 1) ? word >> 32 : word);
    enc.encode_bit(draw >= threshold, model);
  }
  return enc.finalize();
}

}  // namespace

TerminationTrialStats run_termination_trials(std::size_t pairs, std::uint64_t seed,
                                             unsigned threads) {
  constexpr std::size_t kBlock = 1024;
  const std::size_t blocks = (pairs + kBlock - 1) / kBlock;
  std::vector<TerminationTrialStats> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t block) {
    auto& acc = partial[block];
    const std::size_t end = std::min(pairs, (block + 1) * kBlock);
    for (std::size_t trial = block * kBlock; trial < end; ++trial) {
      std::mt19937_64 rng(splitmix64(seed + splitmix64(trial)));
      const FinalCoderState fwd = random_binary_stream(rng, Direction::kForward, false);
      const FinalCoderState bwd = random_binary_stream(rng, Direction::kBackward, false);
      acc.uni.add_single(terminate_single(fwd));
      acc.uni.add_single(terminate_single(bwd));
      acc.fb.add_pair(joint_terminate(fwd, bwd, PackingMode::kForwardBackward));
      acc.fr.add_pair(joint_terminate(fwd, bwd, PackingMode::kForwardReversed));
    }
  });
  TerminationTrialStats total;
  for (const auto& p : partial) {
    total.uni.merge(p.uni);
    total.fb.merge(p.fb);
    total.fr.merge(p.fr);
  }
  return total;
}

TerminationStats termination_experiment(PackingMode mode, std::size_t pairs,
                                        std::uint64_t seed, unsigned threads) {
  const auto all = run_termination_trials(pairs, seed, threads);
  switch (mode) {
    case PackingMode::kUni:
      return all.uni;
    case PackingMode::kForwardBackward:
      return all.fb;
    case PackingMode::kForwardReversed:
      return all.fr;
  }
  return all.uni;
}

OverheadFactors overhead_factors(PackingMode mode, IndexCodec codec, double extra_bits) {
  if (mode == PackingMode::kUni && codec == IndexCodec::kI32)
    return {0.0, (32.0 + extra_bits) / 8.0};
  if (mode == PackingMode::kUni && codec == IndexCodec::kRtc)
    return {1.0 / 8.0, (2.0 + extra_bits) / 8.0};
  // Half as many entries as streams, each covering about twice the bytes:
  // N_e [log2(D/N_e) + 2] + N_s T = N_s [log2(D/N_s) + 3 + 2T] / 2.
  if (is_bidirectional(mode) && codec == IndexCodec::kRtc)
    return {1.0 / 16.0, (3.0 + 2.0 * extra_bits) / 16.0};
  throw ContractViolation("no overhead factors for " + std::string(to_string(mode)) + "/" +
                          std::string(to_string(codec)));
}

double relative_overhead(const OverheadFactors& f, double avg_stream_bytes) {
  return (f.alpha * std::log2(avg_stream_bytes) + f.beta) / avg_stream_bytes;
}

double relative_overhead(const OverheadFactors& f, double data_bytes, double streams) {
  return streams * (f.alpha * std::log2(data_bytes / streams) + f.beta) / data_bytes;
}

std::vector<CurvePoint> overhead_curve(const OverheadFactors& f, double from, double to,
                                       std::size_t points) {
  if (!(from >= 1.0) || !(to >= from) || points < 2)
    throw ContractViolation("overhead_curve: need 1 <= from <= to and >= 2 points");
  std::vector<CurvePoint> out(points);
  const double step = std::log(to / from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double b = from * std::exp(step * static_cast<double>(i));
    out[i] = {b, relative_overhead(f, b)};
  }
  return out;
}

}  // namespace pec
