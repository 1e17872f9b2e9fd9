#include <iostream>

#include "stochosc/cli.hpp"

int main(int argc, char** argv) { return stochosc::run_cli(argc, argv, std::cout, std::cerr); }
