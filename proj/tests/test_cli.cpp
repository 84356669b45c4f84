#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qbmf/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qbmf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qbmf::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("eval prints a value") {
  const auto k = run({"eval", "K", "--kind", "2", "--nu", "0.5", "--q", "0.5", "--z", "1"});
  CHECK(k.code == qbmf::cli::kExitOk);
  CHECK(k.out.find("value") != std::string::npos);
  CHECK(k.out.find("nan") == std::string::npos);

  const auto a = run({"eval", "A", "--nu", "0.7", "--q", "0.6", "--format", "csv"});
  CHECK(a.code == qbmf::cli::kExitOk);
  const auto row = a.out.substr(a.out.find('\n') + 1);
  CHECK(std::abs(std::stod(row.substr(0, row.find(','))) - 1.0) < 1e-12);
}

TEST_CASE("eval reports numeric failures") {
  // Kind 1 outside the radius of its series without --continue.
  const auto r = run({"eval", "I", "--kind", "1", "--nu", "0.5", "--q", "0.5", "--z", "10"});
  CHECK(r.code == qbmf::cli::kExitNumeric);
  CHECK(r.err.find("radius") != std::string::npos);
  const auto c = run({"eval", "I", "--kind", "1", "--nu", "0.5", "--q", "0.5", "--z", "10", "--continue"});
  CHECK(c.code == qbmf::cli::kExitOk);
  CHECK(c.out.find("continuation") != std::string::npos);
}

TEST_CASE("table output is stable") {
  const std::vector<std::string> args{"table", "K",   "--kind",  "3", "--nu",     "1.5", "--q",
                                      "0.7",   "--z-range", "0.5", "2", "--count", "4",   "--format", "csv"};
  const auto first = run(args);
  CHECK(first.code == qbmf::cli::kExitOk);
  CHECK(count_lines(first.out) == 5);
  CHECK(first.out.rfind("z,value_re,value_im,abs_err\n", 0) == 0);
  CHECK(run(args).out == first.out);
}

TEST_CASE("table marks failing rows") {
  const auto r = run({"table", "K", "--kind", "2", "--nu", "1.5", "--q", "0.5", "--rep", "integral-single",
                      "--z-range", "0.5", "1", "--count", "2", "--format", "csv"});
  CHECK(r.code == qbmf::cli::kExitNumeric);
  CHECK(r.out.find(",nan,nan,error") != std::string::npos);
}

TEST_CASE("verify subcommand") {
  const auto ok = run({"verify", "moments", "--q", "0.5"});
  CHECK(ok.code == qbmf::cli::kExitOk);
  const auto strict = run({"verify", "difference-equations", "--q", "0.5", "--tol", "1e-30"});
  CHECK(strict.code == qbmf::cli::kExitCheckFailure);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == qbmf::cli::kExitUsage);
  CHECK(run({"eval", "K", "--nu", "0.5"}).code == qbmf::cli::kExitUsage);
  CHECK(run({"eval", "Q", "--q", "0.5"}).code == qbmf::cli::kExitUsage);
  CHECK(run({"eval", "K", "--q", "1.5"}).code == qbmf::cli::kExitUsage);
  CHECK(run({"verify", "nonexistent"}).code == qbmf::cli::kExitUsage);
  CHECK(run({"table", "K", "--q", "0.5", "--z-range", "2", "1", "--count", "3"}).code == qbmf::cli::kExitUsage);
  CHECK(run({"--help"}).code == qbmf::cli::kExitOk);
}
