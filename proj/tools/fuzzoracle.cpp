#include <iostream>

#include "fuzzoracle/cli/commands.hpp"

int main(int argc, char** argv) {
  return fuzzoracle::cli::run(argc, argv, std::cout, std::cerr);
}
