#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace tfrotor::cli {

struct Check {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct SuiteSettings {
  int n = 0;  // 0: the suite's default dimensions
  std::size_t N = 0;
  double T = 8.0;
  double p = 2.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string mode = "all";
};

std::vector<Check> run_suite(const std::string& suite, const SuiteSettings& s);

void print_checks(std::ostream& os, const std::vector<Check>& checks);

}  // namespace tfrotor::cli
