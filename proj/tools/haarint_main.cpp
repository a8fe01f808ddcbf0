#include <iostream>
#include <string>
#include <vector>

#include "haarint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  haarint::CliResult res = haarint::runCli(args);
  if (!res.out.empty()) std::cout << res.out;
  if (!res.err.empty()) std::cerr << res.err;
  return res.exitCode;
}
