#include <iostream>

#include "qdunkl/cli.hpp"

int main(int argc, char** argv) {
  return qdunkl::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
