// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all
// pass. Runs the full (non-quick) verification suite and writes the report
// next to the binary.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "korodisc/verify.hpp"

int main(int argc, char** argv) {
  korodisc::VerifyOptions opt;
  opt.threads = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick") opt.quick = true;
    else if (a == "--threads" && i + 1 < argc) opt.threads = static_cast<unsigned>(std::atoi(argv[++i]));
    else if (a == "--check" && i + 1 < argc) opt.only.emplace_back(argv[++i]);
  }
  const auto report = korodisc::run_verification(opt);
  for (const auto& c : report.checks) {
    const char* status = c.pass ? "PASS" : "FAIL";
    if (c.criterion > 0) std::printf("%s criterion %2d %-28s %s\n", status, c.criterion, c.name.c_str(), c.tolerance.c_str());
    else std::printf("%s supplement   %-28s %s\n", status, c.name.c_str(), c.tolerance.c_str());
    if (!c.error.empty()) std::printf("     error: %s\n", c.error.c_str());
  }
  std::ofstream("acceptance_report.json") << korodisc::dump(report.to_json(true));
  std::printf("%s\n", report.all_pass() ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return report.all_pass() ? 0 : 1;
}
