#include <iostream>

#include "lctrs/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lctrs::run(args, std::cout, std::cerr);
}
