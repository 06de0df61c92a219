#include <iostream>

#include "gaussground/cli.h"

int main(int argc, char** argv) {
  return gg::cli::run(argc, argv, std::cout, std::cerr);
}
