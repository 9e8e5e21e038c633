#include <iostream>

#include "geospectral/cli.hpp"

int main(int argc, char** argv) { return geospectral::cli::run(argc, argv, std::cout, std::cerr); }
