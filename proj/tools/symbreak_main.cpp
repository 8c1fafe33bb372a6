#include <string>
#include <vector>

#include "symbreak/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return symbreak::cli::run(args);
}
