#include <iostream>

#include "urnet_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return urnet::cli::run(args, std::cout, std::cerr);
}
