#include <iostream>

#include "rcplan/cli.hpp"

int main(int argc, char** argv) { return rcplan::run_cli(argc, argv, std::cout, std::cerr); }
