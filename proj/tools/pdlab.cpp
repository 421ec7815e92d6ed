#include <iostream>

#include "pdlab_cli.hpp"

int main(int argc, char** argv) { return pdlab::cli::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
