#include <iostream>

#include "cli_commands.h"

int main(int argc, char** argv) { return p4p::cli::Main(argc, argv, std::cout, std::cerr); }
