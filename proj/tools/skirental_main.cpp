#include <iostream>

#include "skirental/cli.hpp"

int main(int argc, char** argv) { return skirental::run_cli(argc, argv, std::cout, std::cerr); }
