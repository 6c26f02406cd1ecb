#include <string>
#include <vector>

#include "qkr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qkr::cli::run(std::move(args));
}
