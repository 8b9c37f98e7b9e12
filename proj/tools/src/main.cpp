#include <iostream>

#include "varcont/cli.hpp"

int main(int argc, char** argv) { return varcont::cli::run(argc, argv, std::cout, std::cerr); }
