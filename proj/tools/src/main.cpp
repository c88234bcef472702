#include <iostream>
#include <string>
#include <vector>

#include "fsm_tools/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fsm::cli::run(args, std::cout, std::cerr);
}
