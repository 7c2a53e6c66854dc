#include <iostream>
#include <vector>

#include "comparegen/cli.h"

int main(int argc, char** argv) {
  using namespace comparegen;
  RunConfig cfg;
  try {
    cfg = parse_args(std::vector<std::string>(argv + 1, argv + argc),
                     Tool::compare_gen);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << usage_text(Tool::compare_gen);
    return 1;
  }
  return run(cfg, std::cout, std::cerr);
}
