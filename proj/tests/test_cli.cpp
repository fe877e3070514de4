#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_pec(std::vector<std::string> args) {
  args.insert(args.begin(), "pec");
  std::ostringstream out, err;
  const int code = pec::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pec_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write(const std::string& path, const std::string& content) {
  std::ofstream(path, std::ios::binary) << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli roundtrips across flags") {
  TempDir dir;
  std::string text;
  for (int i = 0; i < 400; ++i) text += "the quick brown fox " + std::to_string(i * i) + "\n";
  write(dir.file("in.txt"), text);
  write(dir.file("empty"), "");

  for (std::string mode : {"uni", "fb", "fr"}) {
    for (std::string index : {"i32", "rtc", "bic", "gamma"}) {
      for (std::string model : {"order0", "bernoulli", "bernoulli:0.6"}) {
        for (std::string input : {"in.txt", "empty"}) {
          const auto c = dir.file("c.pec");
          const auto r = run_pec({"encode", dir.file(input), "-o", c, "--mode", mode, "--index",
                              index, "--streams", "8", "--model", model});
          REQUIRE(r.code == 0);
          REQUIRE(run_pec({"decode", c, "-o", dir.file("back")}).code == 0);
          CHECK(slurp(dir.file("back")) == slurp(dir.file(input)));
        }
      }
    }
  }
}

TEST_CASE("cli inspect reports the layout") {
  TempDir dir;
  write(dir.file("in"), std::string(5000, 'a') + std::string(3000, 'b'));
  REQUIRE(run_pec({"encode", dir.file("in"), "-o", dir.file("c"), "--streams", "4"}).code == 0);
  const auto r = run_pec({"inspect", dir.file("c")});
  CHECK(r.code == 0);
  CHECK(r.out.find("mode:            fr") != std::string::npos);
  CHECK(r.out.find("segments:        2") != std::string::npos);
  CHECK(r.out.find("index bits/entry") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  TempDir dir;
  write(dir.file("in"), "abc");
  write(dir.file("junk"), "not a container");
  CHECK(run_pec({}).code == 1);
  CHECK(run_pec({"encode", dir.file("in")}).code == 1);
  CHECK(run_pec({"encode", dir.file("in"), "-o", dir.file("c"), "--mode", "xx"}).code == 1);
  CHECK(run_pec({"encode", dir.file("in"), "-o", dir.file("c"), "--mode", "fb", "--streams", "3"})
            .code == 1);
  CHECK(run_pec({"encode", dir.file("in"), "-o", dir.file("c"), "--model", "bernoulli:2"}).code == 1);
  CHECK(run_pec({"decode", dir.file("junk"), "-o", dir.file("x")}).code == 2);
  CHECK(run_pec({"inspect", dir.file("missing")}).code == 2);
  CHECK(run_pec({"--help"}).code == 0);
}

TEST_CASE("cli benches are deterministic") {
  const auto a = run_pec({"bench-term", "--pairs", "500", "--seed", "3"});
  const auto b = run_pec({"bench-term", "--pairs", "500", "--seed", "3", "--threads", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# bench-term seed=3 pairs=500") == 0);
  CHECK(a.out.find("\nuni,1000,") != std::string::npos);

  const auto o = run_pec({"bench-overhead"});
  CHECK(o.code == 0);
  CHECK(o.out.find("uni,i32,4.56,0,4.57") != std::string::npos);
  CHECK(o.out.find("fb,rtc,2.77,0.0625,0.53375\nfr,rtc,1.78,0.0625,0.41") != std::string::npos);

  const auto i1 = run_pec({"bench-index", "--trials", "2", "--seed", "9"});
  const auto i2 = run_pec({"bench-index", "--trials", "2", "--seed", "9"});
  CHECK(i1.code == 0);
  CHECK(i1.out == i2.out);
  CHECK(i1.out.find("\nrtc,0.1,") != std::string::npos);
  CHECK(i1.out.find("\nbic,0.1,") != std::string::npos);
}
