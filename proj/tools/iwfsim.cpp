#include "iwf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return iwf::run_cli(argc, argv, std::cout, std::cerr);
}
