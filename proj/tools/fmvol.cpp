#include <iostream>

#include "fmvol/cli.hpp"

int main(int argc, char** argv) { return fmvol::cli::main_entry(argc, argv, std::cout, std::cerr); }
