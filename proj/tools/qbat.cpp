#include <iostream>

#include "qbat/cli.hpp"

int main(int argc, char** argv) { return qbat::cli::run(argc, argv, std::cout, std::cerr); }
