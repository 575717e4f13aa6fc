#include <iostream>

#include "drnv/cli.hpp"

int main(int argc, char** argv) { return drnv::run_cli(argc, argv, std::cout, std::cerr); }
