#include <iostream>

#include "slicemine/cli.hpp"

int main(int argc, char** argv) { return slicemine::cli::main(argc, argv, std::cout, std::cerr); }
