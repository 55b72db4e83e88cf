#include <iostream>

#include "reactest/cli.hpp"

int main(int argc, char** argv) { return reactest::run_cli(argc, argv, std::cout, std::cerr); }
