// Acceptance runner: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <cstdio>
#include <iostream>

#include "mslab/acceptance.hpp"

int main() {
  const mslab::RunReport r = mslab::run_report();
  int index = 0;
  for (const auto &c : r.checks) {
    std::printf("[%s] %2d %-20s %-55s %.3fs\n", c.passed ? "PASS" : "FAIL", ++index,
                c.name.c_str(), c.title.c_str(), c.seconds);
    for (const auto &f : c.failures)
      std::printf("       %s\n", f.c_str());
  }
  std::printf("%s: %d criteria, total %.2fs\n", r.passed() ? "PASS" : "FAIL", index,
              r.seconds);
  return r.passed() ? 0 : 1;
}
