#pragma once

#include <string>
#include <vector>

namespace dau {

struct CliResult {
  // 0: holds / all good; 1: check failed or mismatch; 2: usage or input error.
  int exit_code = 0;
  std::string output;
};

// Full command surface of the dau-mc tool: validate, check, mission,
// oracle-eval, patterns, casestudy. args are the words after the program
// name. Model arguments name a JSON file, a bundled fixture, or
// "fixture:NAME". Every command takes --format text|json; json reports
// carry no timing so identical inputs render identical bytes.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace dau
