#include <string>
#include <vector>

#include "linekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return linekit::run_cli(args);
}
