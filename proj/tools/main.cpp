#include <iostream>
#include <string>
#include <vector>

#include "srrt/cli.hpp"

int main(int argc, char** argv) {
  return srrt::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
