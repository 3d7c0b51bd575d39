#include <iostream>

#include "sforge/cli.hpp"

int main(int argc, char** argv) {
  return sforge::run_cli(argc, argv, std::cout, std::cerr);
}
