#include "fockarc/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fockarc::run_cli(argc, argv, std::cout, std::cerr); }
