#include <iostream>
#include <string>
#include <vector>

#include "creaturekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return creaturekit::cli::dispatch(args, std::cin, std::cout, std::cerr);
}
