#include <string>
#include <vector>

#include "smcsweep/cli/cli.hpp"

int main(int argc, char** argv) {
  return smcsweep::cli::dispatch(std::vector<std::string>(argv, argv + argc));
}
