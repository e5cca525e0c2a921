#include <iostream>

#include "fincon/cli.hpp"

int main(int argc, char** argv) { return fincon::cli::run(argc, argv, std::cout, std::cerr); }
