#include "frontdoor/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return pnsubd::frontdoor::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
