#include "aif_cli/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  return aif::cli::run_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
