#include "esgport/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return esgport::cli::run(argc, argv, std::cout, std::cerr); }
