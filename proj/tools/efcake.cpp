#include <iostream>

#include "efcake/cli.hpp"

int main(int argc, char** argv) { return efcake::cli::run_cli(argc, argv, std::cout, std::cerr); }
