#include <iostream>

#include "sparseproc/io/cli.hpp"

int main(int argc, char** argv) { return sparseproc::io::run_cli(argc, argv, std::cout, std::cerr); }
