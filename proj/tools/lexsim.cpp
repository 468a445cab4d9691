#include <iostream>
#include <string>
#include <vector>

#include "lexsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lexsim::run_cli(args, std::cout, std::cerr);
}
