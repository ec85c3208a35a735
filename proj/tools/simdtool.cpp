#include <iostream>

#include "report/commands.hpp"

int main(int argc, char** argv) {
  return simdist::report::run(argc, argv, std::cout, std::cerr);
}
