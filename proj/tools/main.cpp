#include <iostream>

#include "moran/cli.hpp"

int main(int argc, char **argv) {
  return moran::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
