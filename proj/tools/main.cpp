#include <string>
#include <vector>

#include "svpc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return svpc::run_cli(args);
}
