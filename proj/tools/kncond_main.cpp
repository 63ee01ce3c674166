#include <iostream>

#include "kncond/cli.hpp"

int main(int argc, char** argv) { return kncond::run_cli(argc, argv, std::cout, std::cerr); }
