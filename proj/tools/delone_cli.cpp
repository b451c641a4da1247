#include <iostream>
#include <string>
#include <vector>

#include "delone/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return delone::run_command(args, std::cout, std::cerr);
}
