#include <iostream>

#include "korodisc/cli.hpp"

int main(int argc, char** argv) {
  return korodisc::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
