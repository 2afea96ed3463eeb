#include <iostream>

#include "kplab_cli/run.hpp"

int main(int argc, char** argv) {
  return kplab::cli::main_entry(argc, argv, std::cout, std::cerr);
}
