#include <string>
#include <vector>

#include "npexec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return npexec::cli::run(std::move(args));
}
