#include "gridcodec/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gridcodec::run_cli(argc, argv, std::cout, std::cerr); }
