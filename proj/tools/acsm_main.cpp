#include <iostream>

#include "acsm/cli.hpp"

int main(int argc, char** argv) { return acsm::cli::run(argc, argv, std::cout, std::cerr); }
