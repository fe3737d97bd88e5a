#include <iostream>
#include <string>
#include <vector>

#include "fekete/cli_reports.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fekete::run_cli(args, std::cout, std::cerr);
}
