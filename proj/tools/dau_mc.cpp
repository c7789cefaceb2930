#include <cstdio>
#include <string>
#include <vector>

#include "dau/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  dau::CliResult r = dau::run_cli(args);
  std::fputs(r.output.c_str(), stdout);
  return r.exit_code;
}
