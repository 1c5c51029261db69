// Acceptance run: one PASS/FAIL line per criterion. The first ten come from the
// library's oracle checks; the last runs the CLI given as argv[1] twice per
// command and compares the bytes.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "regulab/selftest.hpp"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured capture(const std::string& cli, const std::string& args, const std::filesystem::path& file) {
  const std::string cmd = "'" + cli + "' " + args + " >'" + file.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(file)};
}

const std::vector<std::string> kCommands = {
    "selftest",
    "well-energy --lambda 1 --a 1 --eps0 0.001 --eps1 0.001 --tau 0.05 --grid -0.5:0.5:5",
    "well-energy --path 2,2,1 --s-schedule 0.2,0.1,0.05 --format json",
    "step-energy --lambda 1 --mass 1 --grid 0.5:2:4",
    "step-energy --compare --eps0 0.04 --eps1 0.04 --tau 0.2 --grid 1:1:1",
    "limit-scan --expr ratio239 --path 2,1,2",
    "limit-scan --expr ratio239 --path 1,2,1",
    "limit-scan --expr ratio239 --path 1,1,1,1,1,0",
    "limit-scan --expr dterm616 --path 2,2,1 --format json",
    "limit-scan --expr rstatic317 --path 1,1,1",
    "limit-scan --expr flanagan --V 'v + 0.1*sin(v)' --path 1,1,1,0,1,0 --s-schedule 0.1,0.05,0.025,0.0125",
    "flanagan --V 'exp(v)' --mode taylor --grid -1:1:5",
    "flanagan --V 'exp(v)' --mode tau_first --tau 0.1",
    "flanagan --V 'tanh(v)' --mode pointsplit --offset 0.01 --tau 0.05 --grid -1:1:5",
    "qi-bound --rho 'exp(-(x/2)^2)/(2*sqrt(pi))' --support=-30,30",
    "qi-bound --rho '1/(1 + x^2)' --support=-10,10 --format json",
};

regulab::selftest::CheckResult check_determinism(const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() / ("regulab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  int identical = 0;
  std::string mismatch;
  for (std::size_t i = 0; i < kCommands.size(); ++i) {
    const auto a = capture(cli, kCommands[i], dir / (std::to_string(i) + "a"));
    const auto b = capture(cli, kCommands[i], dir / (std::to_string(i) + "b"));
    const bool usable = a.code == 0 || (kCommands[i] == "selftest" && a.code == 1);
    if (usable && a.code == b.code && a.out == b.out && !a.out.empty()) {
      ++identical;
    } else if (mismatch.empty()) {
      mismatch = "; first mismatch: " + kCommands[i] + " (exit " + std::to_string(a.code) + "/" +
                 std::to_string(b.code) + ")";
    }
  }
  std::filesystem::remove_all(dir);
  const bool ok = identical == static_cast<int>(kCommands.size());
  return {11, "determinism: repeated CLI runs are byte-identical", ok,
          std::to_string(identical) + "/" + std::to_string(kCommands.size()) + " commands identical" + mismatch};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to regulab>\n";
    return 2;
  }
  std::vector<regulab::selftest::CheckResult> results;
  for (const auto& check : regulab::selftest::all_checks()) results.push_back(check());
  results.push_back(check_determinism(argv[1]));

  int failed = 0;
  for (const auto& r : results) {
    failed += !r.passed;
    std::printf("%s criterion %2d: %s\n    %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed ? 1 : 0;
}
