#include <iostream>
#include <string>
#include <vector>

#include "csop/cli/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return csop::cli::run_command_line(args, std::cout, std::cerr);
}
