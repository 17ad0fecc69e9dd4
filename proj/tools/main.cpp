#include "bakersim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bakersim::cli::run(argc, argv, std::cout, std::cerr); }
