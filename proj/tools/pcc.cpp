#include <iostream>
#include <string>
#include <vector>

#include "pcc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pcc::run_cli(args, std::cout, std::cerr);
}
