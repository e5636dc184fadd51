#include <iostream>

#include "geoapprox/cli.hpp"

int main(int argc, char** argv) { return geo::run_cli(argc, argv, std::cout, std::cerr); }
