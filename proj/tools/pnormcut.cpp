#include <iostream>
#include <string>
#include <vector>

#include "pnormcut/commands.hpp"

int main(int argc, char** argv) {
  return pnormcut::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
