#include "seqdec/cli.hpp"

int main(int argc, char** argv) {
  return seqdec::cli::run(std::vector<std::string>(argv, argv + argc));
}
