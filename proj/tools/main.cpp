#include <iostream>
#include <string>
#include <vector>

#include "spinel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return spinel::runCli(std::move(args), std::cin, std::cout, std::cerr);
}
