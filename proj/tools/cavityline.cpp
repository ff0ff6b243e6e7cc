#include <iostream>

#include "cavityline/cli.hpp"

int main(int argc, char** argv) {
  return cavityline::cli::run(argc, argv, std::cout, std::cerr);
}
