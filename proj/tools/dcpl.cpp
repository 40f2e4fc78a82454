#include <iostream>

#include "dcpl/cli.hpp"

int main(int argc, char** argv) { return dcpl::run_cli(argc, argv, std::cout, std::cerr); }
