#include <iostream>

#include "snowframe/control/cli.hpp"

int main(int argc, char** argv) { return snowframe::control::run_cli(argc, argv, std::cout, std::cerr); }
