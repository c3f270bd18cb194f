#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return indep_bounds::cli::run(argc, argv, std::cout, std::cerr); }
