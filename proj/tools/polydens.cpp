#include <iostream>
#include <string>
#include <vector>

#include "polydens/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return polydens::cli::dispatch(args, std::cout, std::cerr);
}
