#include <iostream>
#include <string>
#include <vector>

#include "dectlink/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return dectlink::cli::run(args, std::cout, std::cerr);
}
