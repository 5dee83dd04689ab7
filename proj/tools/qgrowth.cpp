#include "qgk/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  try {
    return qgk::cli::run(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
