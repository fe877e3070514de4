#pragma once

// Benchmark harness: log2-normal size sources, index-compression redundancy,
// termination overhead statistics, and the overhead model
//   W(D, N_s) = N_s * (alpha * log2(D / N_s) + beta) / D
//   W(b)      = (alpha * log2(b) + beta) / b,   b = D / N_s.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pec/common.hpp"
#include "pec/termination.hpp"

namespace pec {

// Reference per-bitstream termination overheads (bits) for UNI, FB and FR.
inline constexpr double kReferenceExtraBitsUni = 4.56;
inline constexpr double kReferenceExtraBitsFb = 2.77;
inline constexpr double kReferenceExtraBitsFr = 1.78;

// Identifies the sampler in CSV metadata.
inline constexpr const char* kGeneratorName = "std::mt19937_64+std::normal_distribution";

std::uint64_t splitmix64(std::uint64_t x);

// B = round(2^Z), Z ~ Normal(mu, sigma^2), mu = log2(mean) - ln(2) sigma^2 / 2.
// Samples are clamped to [1, max_value].
class Log2NormalSource {
 public:
  Log2NormalSource(double mean, double sigma, std::uint64_t seed,
                   std::uint32_t max_value = (1u << 24) - 1);

  double mu() const { return mu_; }
  std::uint32_t sample();
  std::vector<std::uint32_t> sample(std::size_t n);

 private:
  double mu_;
  double sigma_;
  std::uint32_t max_value_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

// Differential entropy (bits) of the log2-normal law with mean B and
// log-deviation sigma.
double log2_normal_entropy(double mean, double sigma);

struct Log2NormalFit {
  double mean = 0.0;
  double sigma = 0.0;
  double entropy = 0.0;
  // sigma == 0; entropy reported as 0.
  bool degenerate = false;
};

Log2NormalFit fit_log2_normal(std::span<const std::uint32_t> sizes);

struct RedundancyRow {
  IndexCodec codec = IndexCodec::kRtc;
  double log2_mean = 0.0;
  double sigma = 0.0;
  double rate = 0.0;         // bits per entry, averaged over trials
  double entropy = 0.0;      // H_B
  double redundancy = 0.0;   // rate - H_B
  double estimator = 0.0;    // log2(mean) + 2 - H_B
  double estimate_minus_rate = 0.0;  // mean of log2(sample mean) + 2 - rate
  double fit_entropy = 0.0;  // mean fitted entropy over trials
};

inline constexpr std::size_t kRedundancyEntries = 128;

std::vector<RedundancyRow> redundancy_experiment(IndexCodec codec,
                                                 std::span<const double> log2_means,
                                                 std::span<const double> sigmas,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t entries = kRedundancyEntries,
                                                 unsigned threads = 0);

struct SigmaAverage {
  double sigma = 0.0;
  double redundancy = 0.0;  // mean of redundancy over the rows with this sigma
  double estimator = 0.0;
};
// Averages rows per sigma, restricted to log2_mean in [lo, hi].
std::vector<SigmaAverage> average_by_sigma(std::span<const RedundancyRow> rows, double lo = 4.0,
                                           double hi = 20.0);

struct TerminationTrialStats {
  TerminationStats uni;
  TerminationStats fb;
  TerminationStats fr;
};

// Each trial codes two pseudo-random binary streams (P(0) ~ U(0.05, 0.95),
// length ~ U{64..4096}) and terminates the same pair three ways.
TerminationTrialStats run_termination_trials(std::size_t pairs, std::uint64_t seed,
                                             unsigned threads = 0);
TerminationStats termination_experiment(PackingMode mode, std::size_t pairs,
                                        std::uint64_t seed, unsigned threads = 0);

struct OverheadFactors {
  double alpha = 0.0;
  double beta = 0.0;  // bytes
};

// Supported: UNI/I32, UNI/RTC, FB/RTC, FR/RTC. `extra_bits` is the mean
// termination overhead per bitstream.
OverheadFactors overhead_factors(PackingMode mode, IndexCodec codec, double extra_bits);

double relative_overhead(const OverheadFactors& f, double avg_stream_bytes);
double relative_overhead(const OverheadFactors& f, double data_bytes, double streams);

struct CurvePoint {
  double avg_stream_bytes = 0.0;
  double overhead = 0.0;
};
// Log-spaced points over [from, to].
std::vector<CurvePoint> overhead_curve(const OverheadFactors& f, double from, double to,
                                       std::size_t points);

}  // namespace pec
