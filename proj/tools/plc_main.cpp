#include <string>
#include <vector>

#include "plc/cli.hpp"

int main(int argc, char** argv) {
  return plc::cli::run(std::vector<std::string>(argv, argv + argc));
}
