#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli/cli.hpp"

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("efg");
  logger->set_level(spdlog::level::warn);
  if (const char* level = std::getenv("EFG_LOG")) {
    logger->set_level(spdlog::level::from_str(level));
  }
  spdlog::set_default_logger(logger);
  std::vector<std::string> args(argv + 1, argv + argc);
  return efg::cli::run(args, std::cout, std::cerr);
}
