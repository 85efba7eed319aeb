#include <iostream>
#include <string>
#include <vector>

#include "guiprep/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return guiprep::run_cli(args, std::cout, std::cerr);
}
