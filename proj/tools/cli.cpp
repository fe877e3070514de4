#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pec/bench.hpp"
#include "pec/container.hpp"
#include "pec/index.hpp"
#include "pec/pipeline.hpp"

namespace pec::cli {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

// Writes to `path`, or to `fallback` when the path is empty.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError("cannot create " + path);
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct ModelSpec {
  bool bernoulli = false;
  std::optional<double> p0;
};

ModelSpec parse_model(const std::string& s) {
  if (s == "order0") return {};
  if (s == "bernoulli") return {true, std::nullopt};
  if (s.rfind("bernoulli:", 0) == 0) {
    const std::string num = s.substr(10);
    std::size_t used = 0;
    double p = 0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || !(p > 0.0 && p < 1.0))
      throw ContractViolation("bernoulli probability must lie in (0, 1): " + num);
    return {true, p};
  }
  throw ContractViolation("unknown model: " + s);
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits;
  bits.reserve(bytes.size() * 8);
  for (auto b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back((b >> i) & 1);
  return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
  if (bits.size() % 8 != 0) throw CorruptDataError("bit count is not a whole number of bytes");
  std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    bytes[i / 8] |= static_cast<std::uint8_t>(bits[i] << (7 - i % 8));
  return bytes;
}

struct Config {
  std::string input;
  std::string out;
  std::string mode = "fr";
  std::string index = "rtc";
  std::uint32_t streams = 1;
  std::string model = "order0";
  std::uint64_t seed = 1;
  std::string csv;
  std::string curve_csv;
  std::size_t pairs = 100000;
  std::size_t trials = 100;
  std::size_t measure_pairs = 0;
  unsigned threads = 0;
};

int cmd_encode(const Config& cfg, std::ostream& out) {
  EncodeOptions opt;
  opt.mode = parse_packing_mode(cfg.mode);
  opt.codec = parse_index_codec(cfg.index);
  opt.streams = cfg.streams;
  opt.threads = cfg.threads;
  segment_count(opt.mode, opt.streams);
  const ModelSpec spec = parse_model(cfg.model);

  const auto input = read_file(cfg.input);
  std::vector<std::uint8_t> container;
  if (spec.bernoulli) {
    const auto bits = bytes_to_bits(input);
    double p0 = 0.5;
    if (spec.p0) {
      p0 = *spec.p0;
    } else if (!bits.empty()) {
      std::size_t zeros = 0;
      for (auto b : bits) zeros += b == 0;
      p0 = static_cast<double>(zeros) / static_cast<double>(bits.size());
    }
    container = encode_parallel(bits, BinaryModel::from_probability(p0), opt);
  } else {
    std::vector<std::uint64_t> counts(CdfModel::kSymbols, 0);
    for (auto b : input) ++counts[b];
    container = encode_parallel(input, CdfModel::from_counts(counts), opt);
  }
  write_file(cfg.out, container);
  out << cfg.input << ": " << input.size() << " -> " << container.size() << " bytes\n";
  return kExitOk;
}

int cmd_decode(const Config& cfg, std::ostream&) {
  const auto container = read_file(cfg.input);
  const auto parsed = read_container(container);
  auto symbols = decode_parallel(container, cfg.threads);
  if (std::holds_alternative<BinaryModel>(parsed.header.model)) symbols = bits_to_bytes(symbols);
  write_file(cfg.out, symbols);
  return kExitOk;
}

int cmd_inspect(const Config& cfg, std::ostream& out) {
  const auto bytes = read_file(cfg.input);
  const auto pc = read_container(bytes);
  const auto& h = pc.header;
  const bool bernoulli = std::holds_alternative<BinaryModel>(h.model);
  out << "file:            " << cfg.input << " (" << bytes.size() << " bytes)\n"
      << "mode:            " << to_string(h.mode) << "\n"
      << "index codec:     " << to_string(h.codec) << "\n"
      << "model:           ";
  if (bernoulli)
    out << "bernoulli p0=" << std::get<BinaryModel>(h.model).p0 << "/65536\n";
  else
    out << "order0\n";
  out << "streams:         " << h.streams << "\n"
      << "segments:        " << pc.sizes.size() << "\n"
      << "symbols:         " << h.symbols << "\n"
      << "header bytes:    " << pc.header_bytes + 2 << "\n"
      << "index bytes:     " << pc.index_bytes << " (" << pc.index_bits << " bits)\n"
      << "data bytes (D):  " << h.data_size << "\n";
  const double entries = static_cast<double>(pc.sizes.size());
  out << std::fixed << std::setprecision(3)
      << "mean segment:    " << mean_size(pc.sizes) << " bytes\n"
      << "min segment:     " << min_size(pc.sizes) << " bytes\n"
      << "index bits/entry " << static_cast<double>(pc.index_bits) / entries << "\n"
      << "segment sizes:";
  for (std::size_t j = 0; j < pc.sizes.size(); ++j) {
    if (j % 12 == 0) out << "\n ";
    out << ' ' << pc.sizes[j];
  }
  out << "\n";
  return kExitOk;
}

void term_rows(std::ostream& os, const TerminationTrialStats& s) {
  os << kTerminationCsvHeader << "\n"
     << termination_csv_row(PackingMode::kUni, s.uni) << "\n"
     << termination_csv_row(PackingMode::kForwardBackward, s.fb) << "\n"
     << termination_csv_row(PackingMode::kForwardReversed, s.fr) << "\n";
}

int cmd_bench_term(const Config& cfg, std::ostream& out) {
  if (cfg.pairs == 0) throw ContractViolation("--pairs must be >= 1");
  const auto stats = run_termination_trials(cfg.pairs, cfg.seed, cfg.threads);
  CsvSink sink(cfg.csv, out);
  *sink << "# bench-term seed=" << cfg.seed << " pairs=" << cfg.pairs
        << " generator=" << kGeneratorName << "\n";
  term_rows(*sink, stats);
  return kExitOk;
}

int cmd_bench_index(const Config& cfg, std::ostream& out) {
  if (cfg.trials == 0) throw ContractViolation("--trials must be >= 1");
  std::vector<IndexCodec> codecs;
  if (cfg.index == "all")
    codecs = {IndexCodec::kRtc, IndexCodec::kBic};
  else
    codecs = {parse_index_codec(cfg.index)};

  std::vector<double> log2_means;
  for (int e = 4; e <= 20; ++e) log2_means.push_back(e);
  std::vector<double> sigmas;
  for (int i = 1; i <= 10; ++i) sigmas.push_back(0.1 * i);

  std::vector<RedundancyRow> rows;
  for (auto codec : codecs) {
    auto r = redundancy_experiment(codec, log2_means, sigmas, cfg.trials, cfg.seed,
                                   kRedundancyEntries, cfg.threads);
    rows.insert(rows.end(), r.begin(), r.end());
  }

  const std::string meta = "# bench-index seed=" + std::to_string(cfg.seed) +
                           " trials=" + std::to_string(cfg.trials) +
                           " entries=" + std::to_string(kRedundancyEntries) +
                           " generator=" + kGeneratorName +
                           " fit_entropy=log2-normal fit of sampled sizes\n";
  CsvSink sink(cfg.csv, out);
  *sink << meta << "codec,sigma,redundancy,estimator\n" << std::setprecision(6);
  for (auto codec : codecs) {
    std::vector<RedundancyRow> mine;
    for (const auto& r : rows)
      if (r.codec == codec) mine.push_back(r);
    for (const auto& a : average_by_sigma(mine))
      *sink << to_string(codec) << ',' << a.sigma << ',' << a.redundancy << ',' << a.estimator
            << "\n";
  }
  if (!cfg.curve_csv.empty()) {
    CsvSink grid(cfg.curve_csv, out);
    *grid << meta
          << "codec,log2_mean,sigma,rate,entropy,redundancy,estimator,estimate_minus_rate,"
             "fit_entropy\n"
          << std::setprecision(6);
    for (const auto& r : rows)
      *grid << to_string(r.codec) << ',' << r.log2_mean << ',' << r.sigma << ',' << r.rate << ','
            << r.entropy << ',' << r.redundancy << ',' << r.estimator << ','
            << r.estimate_minus_rate << ',' << r.fit_entropy << "\n";
  }
  return kExitOk;
}

int cmd_bench_overhead(const Config& cfg, std::ostream& out) {
  double t_uni = kReferenceExtraBitsUni, t_fb = kReferenceExtraBitsFb,
         t_fr = kReferenceExtraBitsFr;
  std::string source = "reference";
  if (cfg.measure_pairs > 0) {
    const auto s = run_termination_trials(cfg.measure_pairs, cfg.seed, cfg.threads);
    t_uni = s.uni.mean_extra_bits();
    t_fb = s.fb.mean_extra_bits();
    t_fr = s.fr.mean_extra_bits();
    source = "measured pairs=" + std::to_string(cfg.measure_pairs) +
             " seed=" + std::to_string(cfg.seed);
  }
  struct Row {
    PackingMode mode;
    IndexCodec codec;
    double t;
  };
  const Row rows[] = {{PackingMode::kUni, IndexCodec::kI32, t_uni},
                      {PackingMode::kUni, IndexCodec::kRtc, t_uni},
                      {PackingMode::kForwardBackward, IndexCodec::kRtc, t_fb},
                      {PackingMode::kForwardReversed, IndexCodec::kRtc, t_fr}};

  CsvSink sink(cfg.csv, out);
  *sink << "# bench-overhead extra_bits=" << source << "\n"
        << "mode,index,extra_bits,alpha,beta\n"
        << std::setprecision(6);
  for (const auto& r : rows) {
    const auto f = overhead_factors(r.mode, r.codec, r.t);
    *sink << to_string(r.mode) << ',' << to_string(r.codec) << ',' << r.t << ',' << f.alpha << ','
          << f.beta << "\n";
  }
  if (!cfg.curve_csv.empty()) {
    CsvSink curve(cfg.curve_csv, out);
    *curve << "# bench-overhead W(b) curves extra_bits=" << source << "\n"
           << "mode,index,avg_stream_bytes,overhead\n"
           << std::setprecision(6);
    for (const auto& r : rows) {
      const auto f = overhead_factors(r.mode, r.codec, r.t);
      for (const auto& p : overhead_curve(f, 10, 1e6, 101))
        *curve << to_string(r.mode) << ',' << to_string(r.codec) << ',' << p.avg_stream_bytes
               << ',' << p.overhead << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel entropy coder with compressed entry-point indexes"};
  app.require_subcommand(1);
  Config cfg;

  auto add_threads = [&](CLI::App* c) {
    c->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  };

  auto* enc = app.add_subcommand("encode", "Compress a file into a container");
  enc->add_option("input", cfg.input, "Input file")->required();
  enc->add_option("-o,--out", cfg.out, "Output container")->required();
  enc->add_option("--mode", cfg.mode, "Packing: uni, fb, fr")->capture_default_str();
  enc->add_option("--index", cfg.index, "Index codec: i32, rtc, bic, gamma")->capture_default_str();
  enc->add_option("--streams", cfg.streams, "Number of bitstreams")->capture_default_str();
  enc->add_option("--model", cfg.model, "order0 or bernoulli[:p0]")->capture_default_str();
  add_threads(enc);

  auto* dec = app.add_subcommand("decode", "Decompress a container");
  dec->add_option("input", cfg.input, "Container file")->required();
  dec->add_option("-o,--out", cfg.out, "Output file")->required();
  add_threads(dec);

  auto* ins = app.add_subcommand("inspect", "Summarize a container");
  ins->add_option("input", cfg.input, "Container file")->required();

  auto* term = app.add_subcommand("bench-term", "Termination overhead table");
  term->add_option("--pairs", cfg.pairs, "Stream pairs")->capture_default_str();
  term->add_option("--seed", cfg.seed)->capture_default_str();
  term->add_option("--csv", cfg.csv, "CSV output (default stdout)");
  add_threads(term);

  auto* idx = app.add_subcommand("bench-index", "Index redundancy versus sigma");
  idx->add_option("--index", cfg.index, "rtc, bic, gamma, i32 or all");
  idx->add_option("--trials", cfg.trials, "Trials per cell")->capture_default_str();
  idx->add_option("--seed", cfg.seed)->capture_default_str();
  idx->add_option("--csv", cfg.csv, "Sigma-averaged CSV (default stdout)");
  idx->add_option("--grid-csv", cfg.curve_csv, "Full grid CSV");
  add_threads(idx);

  auto* ovh = app.add_subcommand("bench-overhead", "Overhead factors and W(b) curves");
  ovh->add_option("--measure-pairs", cfg.measure_pairs,
                  "Measure termination bits over this many pairs (0 = reference values)");
  ovh->add_option("--seed", cfg.seed)->capture_default_str();
  ovh->add_option("--csv", cfg.csv, "Factor table CSV (default stdout)");
  ovh->add_option("--curve-csv", cfg.curve_csv, "W(b) curve CSV");
  add_threads(ovh);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (idx->parsed() && idx->count("--index") == 0) cfg.index = "all";

  try {
    if (enc->parsed()) return cmd_encode(cfg, out);
    if (dec->parsed()) return cmd_decode(cfg, out);
    if (ins->parsed()) return cmd_inspect(cfg, out);
    if (term->parsed()) return cmd_bench_term(cfg, out);
    if (idx->parsed()) return cmd_bench_index(cfg, out);
    if (ovh->parsed()) return cmd_bench_overhead(cfg, out);
  } catch (const ContractViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pec::cli
