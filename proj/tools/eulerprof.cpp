#include <iostream>
#include <string>
#include <vector>

#include "eulerprof/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eulerprof::cli::run(args, std::cout, std::cerr);
}
