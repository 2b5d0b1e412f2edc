#include <iostream>

#include "gfdm/cli.hpp"

int main(int argc, char** argv) { return gfdm::cli::main(argc, argv, std::cout, std::cerr); }
