#include <iostream>

#include "freehardy/cli.hpp"

int main(int argc, char** argv) { return freehardy::run_cli(argc, argv, std::cout, std::cerr); }
