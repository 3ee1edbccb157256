#include <iostream>
#include <string>
#include <vector>

#include "halving/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return halving::run_cli(args, std::cout, std::cerr);
}
