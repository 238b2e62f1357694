#include <iostream>
#include <string>
#include <vector>

#include "hueseg/cli.hpp"

int main(int argc, char** argv) {
  return hueseg::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
