#include <iostream>
#include <string>
#include <vector>

#include "cars_cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cars::cli::run_command(args, std::cout, std::cerr);
}
