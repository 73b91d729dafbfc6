#include <iostream>

#include "ninf/cli.hpp"

int main(int argc, char** argv) { return ninf::run_cli(argc, argv, std::cout, std::cerr); }
