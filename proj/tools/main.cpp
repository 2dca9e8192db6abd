#include "hole_energy/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hole::cli::run(argc, argv, std::cout, std::cerr); }
