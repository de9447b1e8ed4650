#include <string>
#include <vector>

#include "subdp/pipeline.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subdp::cli::run_cli(args);
}
