#include <iostream>

#include "pathlogic/cli.hpp"

int main(int argc, char** argv) { return pathlogic::cli::run(argc, argv, std::cout, std::cerr); }
