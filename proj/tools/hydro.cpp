#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "hydro/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool color = isatty(STDOUT_FILENO) && !std::getenv("NO_COLOR");
  return hydro::cli::run(args, std::cout, std::cerr, color);
}
