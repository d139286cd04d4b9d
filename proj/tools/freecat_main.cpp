#include <iostream>
#include <vector>

#include "freecat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return freecat::cli::run(args, std::cout, std::cerr);
}
