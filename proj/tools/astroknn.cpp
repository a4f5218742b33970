#include <iostream>

#include "astroknn/cli.hpp"

int main(int argc, char** argv) { return astroknn::run_cli(argc, argv, std::cout, std::cerr); }
