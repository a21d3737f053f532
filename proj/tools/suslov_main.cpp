#include <iostream>

#include "suslov/cli.hpp"

int main(int argc, char** argv) {
  return suslov::cli::run_cli(argc, argv, std::cout, std::cerr);
}
