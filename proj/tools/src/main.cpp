#include "graev/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return graev::cli::run(argc, argv, std::cout, std::cerr); }
