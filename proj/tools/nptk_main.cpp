#include <iostream>

#include "nptk/cli.hpp"

int main(int argc, char** argv) { return nptk::run_cli(argc, argv, std::cout, std::cerr); }
