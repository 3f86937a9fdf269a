#include <iostream>
#include <string>
#include <vector>

#include "ecf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ecf::cli::run(args, std::cin, std::cout, std::cerr);
}
