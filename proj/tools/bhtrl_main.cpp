#include <iostream>

#include "bhtrl/cli.hpp"

int main(int argc, char** argv) { return bhtrl::run_cli(argc, argv, std::cout, std::cerr); }
