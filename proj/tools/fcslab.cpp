#include <iostream>
#include <string>
#include <vector>

#include "fcs/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fcs::run_cli(args, std::cout, std::cerr);
}
