#include <iostream>

#include "qbmf/cli.hpp"

int main(int argc, char** argv) { return qbmf::cli::run(argc, argv, std::cout, std::cerr); }
