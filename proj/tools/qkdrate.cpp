#include <iostream>
#include <string>
#include <vector>

#include "qkd/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return qkd::cli::main(args, std::cout, std::cerr);
}
