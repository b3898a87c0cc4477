#include <iostream>

#include "popax/cli.hpp"

int main(int argc, char** argv) {
  return popax::cli_run(argc, argv, std::cout, std::cerr);
}
