#include <iostream>
#include <string>
#include <vector>

#include "boxproj/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return boxproj::run_cli(args, std::cout, std::cerr);
}
