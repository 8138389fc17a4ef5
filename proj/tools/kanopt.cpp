#include <iostream>

#include "kanopt/commands.hpp"

int main(int argc, char** argv) {
  return kanopt::run_cli(argc, argv, std::cout, std::cerr);
}
