#include <iostream>

#include "satnls/cli.hpp"

int main(int argc, char** argv) {
  return satnls::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
