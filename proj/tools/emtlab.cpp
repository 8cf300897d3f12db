#include <iostream>
#include <vector>

#include "emtlab/runner.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return emtlab::cli::run(args, std::cout, std::cerr);
}
