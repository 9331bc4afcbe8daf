#include <iostream>
#include <string>
#include <vector>

#include "hrrm/scenario/command.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hrrm::scenario::run_command(args, std::cout, std::cerr);
}
