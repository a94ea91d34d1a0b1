#include <iostream>

#include "dcm/cli.hpp"

int main(int argc, char** argv) {
  return dcm::run_cli(std::vector<std::string>(argv, argv + argc), std::cout,
                      std::cerr);
}
