#include <iostream>

#include "zsect/cli.hpp"

int main(int argc, char** argv) { return zsect::run_cli(argc, argv, std::cout, std::cerr); }
