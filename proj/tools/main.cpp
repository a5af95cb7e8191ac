#include <iostream>
#include <string>
#include <vector>

#include "mtdd/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return mtdd::runCli(args, std::cout, std::cerr);
}
