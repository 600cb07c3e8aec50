#include <iostream>
#include <string>
#include <vector>

#include "evocut/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return evocut::cli::run(args, std::cout, std::cerr);
}
