#include <iostream>

#include "xplane/cli.hpp"

int main(int argc, char** argv) {
  return xplane::cli::run(argc, argv, std::cout, std::cerr);
}
