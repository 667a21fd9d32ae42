#include <iostream>

#include "xycorr/cli/run.hpp"

int main(int argc, char** argv) { return xycorr::cli::main_entry(argc, argv, std::cout, std::cerr); }
