#include <iostream>

#include "barrierfix/cli.hpp"

int main(int argc, char** argv) {
  return barrierfix::runCli({argv + 1, argv + argc}, std::cout, std::cerr);
}
