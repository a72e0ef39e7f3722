#include <iostream>

#include "cubespec/cli.hpp"

int main(int argc, char** argv) { return cubespec::run_cli(argc, argv, std::cout, std::cerr); }
