#include <iostream>

#include "cvqi_cli/commands.hpp"

int main(int argc, char** argv) { return cvqi::cli::run_cli(argc, argv, std::cout, std::cerr); }
