#include <iostream>

#include "qbs/cli.hpp"

int main(int argc, char** argv) { return qbs::cli::main_entry(argc, argv, std::cout, std::cerr); }
