#include <string>
#include <vector>

#include "herit_ridge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return heritridge::run_command(std::move(args));
}
