#include <vector>

#include "urbanhealth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return urbanhealth::run_cli(args);
}
