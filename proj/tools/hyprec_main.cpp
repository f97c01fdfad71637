#include <iostream>

#include "hyprec/cli.hpp"

int main(int argc, char** argv) { return hyprec::run_cli(argc, argv, std::cout, std::cerr); }
