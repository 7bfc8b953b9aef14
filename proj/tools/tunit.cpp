#include <iostream>

#include "tunit/cli.hpp"

int main(int argc, char** argv) { return tunit::cli::main(argc, argv, std::cout, std::cerr); }
