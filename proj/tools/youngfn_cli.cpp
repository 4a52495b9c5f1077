#include <iostream>
#include <string>
#include <vector>

#include "youngfn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return youngfn::run_cli(args, std::cout, std::cerr);
}
