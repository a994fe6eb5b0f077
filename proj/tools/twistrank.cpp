#include <iostream>

#include "twistrank/cli.hpp"

int main(int argc, char** argv) {
  return twistrank::cli::run(argc, argv, std::cout, std::cerr);
}
