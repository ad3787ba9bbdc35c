#include <iostream>

#include "wqed/cli/commands.hpp"

int main(int argc, char** argv) { return wqed::cli::run(argc, argv, std::cout, std::cerr); }
