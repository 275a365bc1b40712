#include <iostream>
#include <string>
#include <vector>

#include "lauewalk/cli/app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return lauewalk::cli::run_main(args, std::cout, std::cerr);
}
