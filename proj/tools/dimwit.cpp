#include <iostream>

#include "dimwit/cli.hpp"

int main(int argc, char** argv) {
  return dimwit::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
