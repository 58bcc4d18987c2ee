#include <iostream>

#include "inscribed/cli.hpp"

int main(int argc, char** argv) { return inscribed::run_cli(argc, argv, std::cout, std::cerr); }
