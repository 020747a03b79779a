#include <iostream>

#include "negclass/cli.hpp"

int main(int argc, char** argv) { return negclass::cli::run(argc, argv, std::cout, std::cerr); }
