#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "pim/cli.hpp"

int main(int argc, char** argv) {
  pim::cli::CliConfig config;
  if (auto code = pim::cli::parse_args(argc, argv, config, std::cout, std::cerr)) return *code;

  // color only on a terminal; PIM_COLOR=0 turns it off
  const char* env = std::getenv("PIM_COLOR");
  config.color = isatty(STDOUT_FILENO) && !(env && std::strcmp(env, "0") == 0);

  return pim::cli::run(config, std::cin, std::cout, std::cerr);
}
